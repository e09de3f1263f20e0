//! Seeded random elements of known type.
//!
//! A recipe fixes a kind, `n`, a seed and optionally explicit normal-form
//! parameters. The generator builds the normal form, conjugates it by a
//! random group element (unless explicit parameters were given) and returns
//! both together with the conjugator. Identical recipes give bit-identical
//! matrices.
//!
//! Ranges: `θ ∈ [0, π]`, `r ∈ [1.1, 4]`, `|λ| = 1`, `|s| ∈ [0.5, 2]` for
//! vertical parameters, `|a| ∈ [0.5, 1.5]` with `s + s̄ = |a|²`. Distinct
//! random eigenvalue angles are at least 0.15 apart; repeated classes are
//! drawn on purpose.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{hyperbolic_block, non_vertical_block, vertical_block, Kind};
use crate::io::{complex_opt_serde, element_serde, qmatrix_serde};
use crate::qmat::{ball_to_siegel, cayley, qvec, FormContext, GroupElement, QMatrix};
use crate::quat::Quaternion;
use crate::{Error, Result};

const MIN_SEPARATION: f64 = 0.15;

/// Explicit normal-form parameters.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecipeParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(with = "complex_opt_serde", default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Quaternion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Quaternion>,
    /// Diagonal entries: the whole diagonal for elliptic and compact
    /// elements, the compact block otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementRecipe {
    pub kind: Kind,
    pub n: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<RecipeParams>,
    /// Target context; defaults to the ball form for elliptic elements and
    /// the Siegel form otherwise. `sp_n` asks for an element of `Sp(n)`
    /// (elliptic or identity kinds only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<FormContext>,
    /// Conjugate the normal form by a random group element.
    pub conjugate: bool,
}

impl ElementRecipe {
    pub fn new(kind: Kind, n: usize, seed: u64) -> Self {
        ElementRecipe {
            kind,
            n,
            seed,
            params: None,
            context: None,
            conjugate: true,
        }
    }

    /// A random element of `Sp(n)`.
    pub fn compact(n: usize, seed: u64) -> Self {
        Self::new(Kind::Elliptic, n, seed).with_context(FormContext::Positive)
    }

    /// Explicit parameters; switches conjugation off.
    pub fn with_params(mut self, params: RecipeParams) -> Self {
        self.params = Some(params);
        self.conjugate = false;
        self
    }

    pub fn with_context(mut self, ctx: FormContext) -> Self {
        self.context = Some(ctx);
        self
    }

    pub fn with_conjugation(mut self, conjugate: bool) -> Self {
        self.conjugate = conjugate;
        self
    }

    fn target_context(&self) -> FormContext {
        self.context.unwrap_or(match self.kind {
            Kind::Elliptic => FormContext::Ball,
            _ => FormContext::Siegel,
        })
    }
}

/// A generated element with its provenance: `element = conjugator · normal_form · conjugator^-1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sample {
    #[serde(with = "element_serde")]
    pub element: GroupElement,
    #[serde(with = "element_serde")]
    pub normal_form: GroupElement,
    #[serde(with = "qmatrix_serde")]
    pub conjugator: QMatrix,
    pub recipe: ElementRecipe,
}

fn unit_complex(theta: f64) -> Complex64 {
    if theta == PI {
        return Complex64::new(-1.0, 0.0);
    }
    Complex64::from_polar(1.0, theta)
}

/// Draws an angle in `[0, π]`: sometimes 0 or π, sometimes a repeat of an
/// earlier angle, otherwise well separated from the earlier ones.
fn pick_angle(rng: &mut ChaCha8Rng, existing: &[f64]) -> f64 {
    let roll: f64 = rng.gen();
    if roll < 0.15 {
        return if rng.gen_bool(0.5) { 0.0 } else { PI };
    }
    if roll < 0.4 && !existing.is_empty() {
        return existing[rng.gen_range(0..existing.len())];
    }
    for _ in 0..200 {
        let t = rng.gen_range(MIN_SEPARATION..PI - MIN_SEPARATION);
        if existing.iter().all(|&e| (e - t).abs() >= MIN_SEPARATION) {
            return t;
        }
    }
    existing.first().copied().unwrap_or(0.0)
}

fn pick_angles(rng: &mut ChaCha8Rng, count: usize, existing: &mut Vec<f64>) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            let t = pick_angle(rng, existing);
            existing.push(t);
            unit_complex(t)
        })
        .collect()
}

fn random_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

fn random_unit_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    loop {
        let q = random_quaternion(rng);
        let n = q.norm();
        if n > 0.1 && n <= 1.0 {
            return q / n;
        }
    }
}

fn random_imaginary(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Quaternion {
    loop {
        let q = random_quaternion(rng).im();
        let n = q.norm();
        if n > 0.1 && n <= 1.0 {
            return q * (rng.gen_range(lo..hi) / n);
        }
    }
}

fn random_sign(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// Random element of `Sp(dim)`: quaternionic Householder reflections times
/// a diagonal of unit quaternions.
pub fn random_compact_matrix(dim: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    let mut m = QMatrix::diag(&(0..dim).map(|_| random_unit_quaternion(rng)).collect::<Vec<_>>());
    for _ in 0..dim {
        let v: Vec<Quaternion> = (0..dim).map(|_| random_quaternion(rng)).collect();
        let nv = qvec::norm(&v);
        if nv < 1e-3 {
            continue;
        }
        let scale = 2.0 / (nv * nv);
        let h = QMatrix::from_fn(dim, dim, |r, c| {
            let delta = if r == c { Quaternion::ONE } else { Quaternion::ZERO };
            delta - v[r] * v[c].conj() * scale
        });
        m = &h * &m;
    }
    m
}

/// Random element of `Sp(dim - 1, 1)` in the ball form: compact factors
/// around a boost of rapidity in `[0, 1]`.
pub fn random_ball_matrix(dim: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    let k1 = QMatrix::diag(&[random_unit_quaternion(rng)]).direct_sum(&random_compact_matrix(dim - 1, rng));
    let k2 = QMatrix::diag(&[random_unit_quaternion(rng)]).direct_sum(&random_compact_matrix(dim - 1, rng));
    let t: f64 = rng.gen_range(0.0..1.0);
    let mut boost = QMatrix::identity(dim);
    boost[(0, 0)] = Quaternion::real(t.cosh());
    boost[(1, 1)] = Quaternion::real(t.cosh());
    boost[(0, 1)] = Quaternion::real(t.sinh());
    boost[(1, 0)] = Quaternion::real(t.sinh());
    &(&k1 * &boost) * &k2
}

/// Random group element of the given context and size.
pub fn random_group_matrix(ctx: FormContext, dim: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    match ctx {
        FormContext::Positive => random_compact_matrix(dim, rng),
        FormContext::Ball => random_ball_matrix(dim, rng),
        FormContext::Siegel => ball_to_siegel(&random_ball_matrix(dim, rng)).expect("dim >= 2"),
    }
}

fn explicit_classes(params: &RecipeParams, expected: usize) -> Result<Option<Vec<Complex64>>> {
    let Some(classes) = &params.classes else {
        return Ok(None);
    };
    if classes.len() != expected {
        return Err(Error::BadRecipe(format!(
            "expected {expected} diagonal classes, got {}",
            classes.len()
        )));
    }
    let values: Vec<Complex64> = classes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    if values.iter().any(|v| (v.norm() - 1.0).abs() > 1e-12) {
        return Err(Error::BadRecipe("diagonal classes must have modulus 1".into()));
    }
    Ok(Some(values))
}

fn check_lambda(lambda: Complex64) -> Result<Complex64> {
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::BadRecipe("lambda must have modulus 1".into()));
    }
    Ok(lambda)
}

/// Builds the normal form (in its natural context) for a recipe.
fn normal_form(recipe: &ElementRecipe, rng: &mut ChaCha8Rng) -> Result<(QMatrix, FormContext)> {
    let n = recipe.n;
    let p = recipe.params.clone().unwrap_or_default();
    let compact_target = recipe.target_context() == FormContext::Positive;
    let mut angles: Vec<f64> = Vec::new();
    match recipe.kind {
        Kind::Identity => {
            let ctx = if compact_target { FormContext::Positive } else { FormContext::Siegel };
            Ok((QMatrix::identity(ctx.dim_for(n)), ctx))
        }
        Kind::Elliptic => {
            let ctx = if compact_target { FormContext::Positive } else { FormContext::Ball };
            let dim = ctx.dim_for(n);
            let diag = match explicit_classes(&p, dim)? {
                Some(v) => v,
                None => {
                    let mut d = pick_angles(rng, dim, &mut angles);
                    // all angles zero would give the identity
                    if d.iter().all(|z| *z == Complex64::new(1.0, 0.0)) {
                        d[0] = Complex64::new(-1.0, 0.0);
                    }
                    d
                }
            };
            Ok((QMatrix::complex_diag(&diag), ctx))
        }
        Kind::Hyperbolic => {
            let r = p.r.unwrap_or_else(|| rng.gen_range(1.1..4.0));
            if !(r > 1.0 && r.is_finite()) {
                return Err(Error::BadRecipe("r must exceed 1".into()));
            }
            let theta = p.theta.unwrap_or_else(|| pick_angle(rng, &[]));
            let compact = match explicit_classes(&p, n - 1)? {
                Some(v) => v,
                None => pick_angles(rng, n - 1, &mut angles),
            };
            Ok((
                hyperbolic_block(r, theta).direct_sum(&QMatrix::complex_diag(&compact)),
                FormContext::Siegel,
            ))
        }
        Kind::Vertical => {
            let s = p.s.unwrap_or_else(|| random_imaginary(rng, 0.5, 2.0));
            if s.re().abs() > 1e-12 || s.norm() == 0.0 {
                return Err(Error::BadRecipe("vertical s must be nonzero and imaginary".into()));
            }
            let block = vertical_block(Complex64::new(1.0, 0.0), s);
            Ok((block.direct_sum(&QMatrix::identity(n - 1)), FormContext::Siegel))
        }
        Kind::NonVertical => {
            if n < 2 {
                return Err(Error::BadRecipe("non-vertical translations need n >= 2".into()));
            }
            let a = p.a.unwrap_or_else(|| random_unit_quaternion(rng) * rng.gen_range(0.5..1.5));
            let s = p.s.unwrap_or_else(|| {
                Quaternion::real(a.norm_sqr() / 2.0) + random_imaginary(rng, 0.0, 2.0)
            });
            check_non_vertical(s, a)?;
            let block = non_vertical_block(Complex64::new(1.0, 0.0), s, a);
            Ok((block.direct_sum(&QMatrix::identity(n - 2)), FormContext::Siegel))
        }
        Kind::NonUnipotent2 | Kind::NonUnipotent3 => {
            let degree = recipe.kind.unipotent_degree() as usize;
            if n + 1 < degree {
                return Err(Error::BadRecipe(format!("{} needs n >= {}", recipe.kind, degree - 1)));
            }
            let lambda = match p.lambda {
                Some(l) => check_lambda(l)?,
                None => {
                    let t = if rng.gen_bool(0.2) { PI } else { rng.gen_range(MIN_SEPARATION..PI - MIN_SEPARATION) };
                    unit_complex(t)
                }
            };
            if (lambda - Complex64::new(1.0, 0.0)).norm() < 1e-9 {
                return Err(Error::BadRecipe("non-unipotent kinds need lambda != 1".into()));
            }
            angles.push(lambda.arg().abs());
            let block = if degree == 2 {
                let s = p.s.unwrap_or_else(|| Quaternion::new(0.0, random_sign(rng) * rng.gen_range(0.5..2.0), 0.0, 0.0));
                if s.re().abs() > 1e-12 || s.norm() == 0.0 {
                    return Err(Error::BadRecipe("vertical s must be nonzero and imaginary".into()));
                }
                check_commutes(lambda, s, "s")?;
                vertical_block(lambda, s)
            } else {
                let a = p.a.unwrap_or_else(|| {
                    Quaternion::from_complex(Complex64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..2.0 * PI)))
                });
                let s = p.s.unwrap_or_else(|| {
                    Quaternion::new(a.norm_sqr() / 2.0, rng.gen_range(-2.0..2.0), 0.0, 0.0)
                });
                check_non_vertical(s, a)?;
                check_commutes(lambda, s, "s")?;
                check_commutes(lambda, a, "a")?;
                non_vertical_block(lambda, s, a)
            };
            let compact = match explicit_classes(&p, n + 1 - degree)? {
                Some(v) => v,
                None => pick_angles(rng, n + 1 - degree, &mut angles),
            };
            Ok((block.direct_sum(&QMatrix::complex_diag(&compact)), FormContext::Siegel))
        }
    }
}

fn check_non_vertical(s: Quaternion, a: Quaternion) -> Result<()> {
    if a.norm() == 0.0 {
        return Err(Error::BadRecipe("a must be nonzero".into()));
    }
    if (2.0 * s.re() - a.norm_sqr()).abs() > 1e-12 {
        return Err(Error::BadRecipe("s + s̄ must equal |a|²".into()));
    }
    Ok(())
}

fn check_commutes(lambda: Complex64, q: Quaternion, name: &str) -> Result<()> {
    if lambda.im.abs() > 1e-12 && q.j_part().norm() > 1e-12 {
        return Err(Error::BadRecipe(format!("{name} must commute with a non-real lambda")));
    }
    Ok(())
}

/// Generates the element described by `recipe`.
pub fn random_element(recipe: &ElementRecipe) -> Result<Sample> {
    let target = recipe.target_context();
    if recipe.n == 0 {
        return Err(Error::BadRecipe("n must be positive".into()));
    }
    if target == FormContext::Positive && !matches!(recipe.kind, Kind::Elliptic | Kind::Identity) {
        return Err(Error::BadRecipe(format!("{} elements do not live in Sp(n)", recipe.kind)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.seed);
    let (normal, normal_ctx) = normal_form(recipe, &mut rng)?;
    let dim = normal.rows();
    let conj = if recipe.conjugate {
        random_group_matrix(normal_ctx, dim, &mut rng)
    } else {
        QMatrix::identity(dim)
    };
    let conj_inv = crate::qmat::form_inverse(&conj, normal_ctx);
    let inner = &(&conj * &normal) * &conj_inv;

    // change of model: element = T inner T^-1
    let (element, conjugator) = match (normal_ctx, target) {
        (a, b) if a == b => (inner, conj),
        (FormContext::Siegel, FormContext::Ball) => {
            let (p, c) = cayley(dim)?;
            (&(&p * &inner) * &c, &p * &conj)
        }
        (FormContext::Ball, FormContext::Siegel) => {
            let (p, c) = cayley(dim)?;
            (&(&c * &inner) * &p, &c * &conj)
        }
        _ => {
            return Err(Error::BadRecipe(format!(
                "cannot place a {} element in context {}",
                recipe.kind,
                target.json_name()
            )))
        }
    };
    Ok(Sample {
        element: GroupElement::new_unchecked(element, target),
        normal_form: GroupElement::new_unchecked(normal, normal_ctx),
        conjugator,
        recipe: recipe.clone(),
    })
}
