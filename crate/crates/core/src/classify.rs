//! Elliptic / hyperbolic / parabolic classification with normal forms.
//!
//! Every element of a hyperbolic context is brought to one of the normal
//! forms below by an explicit conjugator `k` (so `k g k^-1 = N`):
//!
//! * elliptic: `diag(λ_0, λ_1, ..., λ_n)` in the ball form, `λ_0` of negative type;
//! * hyperbolic: `diag(r e^{iθ}, r^-1 e^{iθ}) ⊕ diag(μ_1, ...)` in the Siegel form;
//! * vertical (`g_u` of degree 2): `λ u_V ⊕ B` with `u_V = ((1,0),(s,1))`, `s + s̄ = 0`;
//! * non-vertical (degree 3): `λ u_NV ⊕ B` with
//!   `u_NV = ((1,0,0),(s,1,ā),(a,0,1))`, `s + s̄ = |a|²`.
//!
//! Conjugators are built from eigenvectors: a null pair spanning the fixed
//! boundary points, completed by form-orthonormal eigenvectors of the
//! compact part. The columns of `k^-1` are that basis.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::io::{complex_opt_serde, complex_serde, complex_vec_serde, qmatrix_serde};
use crate::qmat::{intertwiner_inverse, membership_residual, qvec, FormContext, GroupElement, QMatrix, QVector};
use crate::quat::{similarity_conjugator, Quaternion};
use crate::spectral::{
    analyze, diagonalize_analysis, eigen_classes_of, form_orthonormalize, Analysis, Cluster, EigenClass, UNIT_BAND,
    UNIT_BAND_OUTER,
};
use crate::{Error, Result};

/// Conjugacy type of an element of `Sp(n,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Identity,
    Elliptic,
    Hyperbolic,
    #[serde(rename = "parabolic-vertical")]
    Vertical,
    #[serde(rename = "parabolic-non-vertical")]
    NonVertical,
    #[serde(rename = "parabolic-non-unipotent-2")]
    NonUnipotent2,
    #[serde(rename = "parabolic-non-unipotent-3")]
    NonUnipotent3,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::Identity,
        Kind::Elliptic,
        Kind::Hyperbolic,
        Kind::Vertical,
        Kind::NonVertical,
        Kind::NonUnipotent2,
        Kind::NonUnipotent3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Identity => "identity",
            Kind::Elliptic => "elliptic",
            Kind::Hyperbolic => "hyperbolic",
            Kind::Vertical => "parabolic-vertical",
            Kind::NonVertical => "parabolic-non-vertical",
            Kind::NonUnipotent2 => "parabolic-non-unipotent-2",
            Kind::NonUnipotent3 => "parabolic-non-unipotent-3",
        }
    }

    pub fn is_parabolic(self) -> bool {
        self.unipotent_degree() > 1
    }

    /// Degree of the minimal polynomial of the unipotent part.
    pub fn unipotent_degree(self) -> u32 {
        match self {
            Kind::Vertical | Kind::NonUnipotent2 => 2,
            Kind::NonVertical | Kind::NonUnipotent3 => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    /// Accepts the full names and the short forms `vertical`,
    /// `non-vertical`, `non-unipotent-2`, `non-unipotent-3`.
    fn from_str(s: &str) -> Result<Kind> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let key = key.strip_prefix("parabolic-").unwrap_or(&key);
        Ok(match key {
            "identity" => Kind::Identity,
            "elliptic" => Kind::Elliptic,
            "hyperbolic" | "loxodromic" => Kind::Hyperbolic,
            "vertical" => Kind::Vertical,
            "non-vertical" | "nonvertical" => Kind::NonVertical,
            "non-unipotent-2" | "non-unipotent" => Kind::NonUnipotent2,
            "non-unipotent-3" => Kind::NonUnipotent3,
            _ => return Err(Error::BadRecipe(format!("unknown kind {s:?}"))),
        })
    }
}

/// Parameters of the normal form. Unused fields are `None` / empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NormalFormData {
    /// Semisimple scalar of a parabolic element.
    #[serde(with = "complex_opt_serde", default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Complex64>,
    /// Hyperbolic stretch `r > 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// Hyperbolic rotation angle in `[0, π]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Quaternion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Quaternion>,
    /// Diagonal of the compact block (for elliptic elements, of the whole
    /// normal form, negative-type entry first).
    #[serde(with = "complex_vec_serde", default)]
    pub compact: Vec<Complex64>,
}

/// Classification together with a certified normal form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsometryClass {
    pub kind: Kind,
    /// Context of the classified element.
    pub context: FormContext,
    /// Context preserved by the normal form: the ball form for elliptic
    /// elements, the Siegel form for hyperbolic and parabolic ones.
    pub normal_context: FormContext,
    #[serde(with = "qmatrix_serde")]
    pub normal_form: QMatrix,
    /// `k` with `k g k^-1 = normal_form`; it satisfies
    /// `k* F_normal k = F_context`, so it lies in the group whenever the two
    /// contexts agree.
    #[serde(with = "qmatrix_serde")]
    pub conjugator: QMatrix,
    #[serde(with = "qmatrix_serde")]
    pub conjugator_inverse: QMatrix,
    pub params: NormalFormData,
    pub eigen_classes: Vec<EigenClass>,
    /// Degree of the minimal polynomial of the unipotent part.
    pub unipotent_degree: u32,
    /// `‖k g k^-1 - N‖_F`.
    pub normal_form_residual: f64,
    /// `‖k* F_normal k - F_context‖_F`.
    pub conjugator_residual: f64,
}

impl IsometryClass {
    pub fn normal_element(&self) -> GroupElement {
        GroupElement::new_unchecked(self.normal_form.clone(), self.normal_context)
    }

    /// `k^-1 h k`: moves a matrix from normal-form coordinates back to the
    /// coordinates of the classified element.
    pub fn pull_back(&self, h: &QMatrix) -> QMatrix {
        &(&self.conjugator_inverse * h) * &self.conjugator
    }
}

/// `diag(r e^{iθ}, r^-1 e^{iθ})`.
pub fn hyperbolic_block(r: f64, theta: f64) -> QMatrix {
    QMatrix::complex_diag(&[Complex64::from_polar(r, theta), Complex64::from_polar(1.0 / r, theta)])
}

/// `λ u_V = ((λ, 0), (λ s, λ))`.
pub fn vertical_block(lambda: Complex64, s: Quaternion) -> QMatrix {
    let l = Quaternion::from_complex(lambda);
    let mut m = QMatrix::scalar(2, l);
    m[(1, 0)] = l * s;
    m
}

/// `λ u_NV = ((λ,0,0), (λ s, λ, λ ā), (λ a, 0, λ))`.
pub fn non_vertical_block(lambda: Complex64, s: Quaternion, a: Quaternion) -> QMatrix {
    let l = Quaternion::from_complex(lambda);
    let mut m = QMatrix::scalar(3, l);
    m[(1, 0)] = l * s;
    m[(1, 2)] = l * a.conj();
    m[(2, 0)] = l * a;
    m
}

/// Classifies `g` and computes its normal form.
pub fn classify(g: &GroupElement, tol: f64) -> Result<IsometryClass> {
    if !g.ctx.is_hyperbolic() {
        return Err(Error::WrongContext(
            "classification applies to Sp(n,1) and its Siegel model".into(),
        ));
    }
    let analysis = analyze(g, tol)?;
    classify_analysis(&analysis)
}

/// Classification from a precomputed spectral analysis.
pub fn classify_analysis(analysis: &Analysis) -> Result<IsometryClass> {
    let g = &analysis.element;
    let deviation = analysis.max_modulus_deviation();
    if deviation > UNIT_BAND && deviation <= UNIT_BAND_OUTER {
        return Err(Error::IllConditioned(format!(
            "eigenvalue modulus differs from 1 by {deviation:.2e}"
        )));
    }
    let hyperbolic = deviation > UNIT_BAND_OUTER;
    let eigen_classes = eigen_classes_of(analysis)?;
    let trivial_semisimple = analysis.clusters.len() == 1
        && analysis.clusters[0].is_real()
        && analysis.clusters[0].center.re > 0.0
        && !hyperbolic;
    match (analysis.degree, hyperbolic) {
        (1, true) => hyperbolic_form(analysis, eigen_classes),
        (_, true) => Err(Error::IllConditioned(
            "hyperbolic spectrum with a nontrivial unipotent part".into(),
        )),
        (1, false) if trivial_semisimple => {
            let dim = g.dim();
            let id = QMatrix::identity(dim);
            Ok(IsometryClass {
                kind: Kind::Identity,
                context: g.ctx,
                normal_context: g.ctx,
                normal_form: id.clone(),
                conjugator: id.clone(),
                conjugator_inverse: id.clone(),
                params: NormalFormData {
                    compact: vec![Complex64::new(1.0, 0.0); dim],
                    ..Default::default()
                },
                eigen_classes,
                unipotent_degree: 1,
                normal_form_residual: g.mat.dist(&id),
                conjugator_residual: 0.0,
            })
        }
        (1, false) => elliptic_form(analysis, eigen_classes),
        (2, false) => {
            let kind = if trivial_semisimple { Kind::Vertical } else { Kind::NonUnipotent2 };
            parabolic_form(analysis, kind, eigen_classes)
        }
        (3, false) => {
            let kind = if trivial_semisimple { Kind::NonVertical } else { Kind::NonUnipotent3 };
            parabolic_form(analysis, kind, eigen_classes)
        }
        (d, _) => Err(Error::IllConditioned(format!("unexpected unipotent degree {d}"))),
    }
}

/// Assembles and certifies an [`IsometryClass`] from a basis `u` (columns
/// in the coordinates of `g`) with `u* F_g u = F_normal`.
fn certify(
    analysis: &Analysis,
    kind: Kind,
    basis: QMatrix,
    normal_context: FormContext,
    normal_form: QMatrix,
    params: NormalFormData,
    eigen_classes: Vec<EigenClass>,
) -> IsometryClass {
    let g = &analysis.element;
    let conjugator = intertwiner_inverse(&basis, normal_context, g.ctx);
    let conjugated = &(&conjugator * &g.mat) * &basis;
    let conjugator_residual =
        (&conjugator.star() * &normal_context.apply_left(&conjugator)).dist(&g.ctx.form(g.dim()));
    IsometryClass {
        kind,
        context: g.ctx,
        normal_context,
        normal_form_residual: conjugated.dist(&normal_form),
        normal_form,
        conjugator,
        conjugator_inverse: basis,
        params,
        eigen_classes,
        unipotent_degree: analysis.degree,
        conjugator_residual,
    }
}

fn elliptic_form(analysis: &Analysis, eigen_classes: Vec<EigenClass>) -> Result<IsometryClass> {
    let diag = diagonalize_analysis(analysis)?;
    let normal_form = diag.diagonal_matrix();
    let params = NormalFormData {
        compact: diag.diagonal.clone(),
        ..Default::default()
    };
    Ok(certify(
        analysis,
        Kind::Elliptic,
        diag.basis,
        diag.normal_ctx,
        normal_form,
        params,
        eigen_classes,
    ))
}

/// Largest converted column of a cluster's projector.
fn dominant_vector(cluster: &Cluster) -> QVector {
    cluster
        .candidate_vectors()
        .into_iter()
        .max_by(|a, b| qvec::norm(a).partial_cmp(&qvec::norm(b)).unwrap())
        .expect("non-empty projector")
}

/// Projects `w` onto the form-orthogonal complement of a null pair
/// `(e0, e1)` with `⟨e0, e1⟩ = -1`.
fn project_off_null_pair(ctx: FormContext, w: &[Quaternion], e0: &[Quaternion], e1: &[Quaternion]) -> QVector {
    let w = qvec::add_scaled(w, e0, ctx.inner(e1, w));
    qvec::add_scaled(&w, e1, ctx.inner(e0, &w))
}

/// Form-orthonormal positive eigenvectors spanning the complement, from
/// projected candidates of each canonical cluster.
fn compact_basis(
    analysis: &Analysis,
    project: impl Fn(&[Quaternion]) -> QVector,
    skip: &[usize],
    expected: usize,
) -> Result<Vec<(QVector, Complex64)>> {
    let ctx = analysis.element.ctx;
    let mut out: Vec<(QVector, Complex64)> = Vec::new();
    for (idx, c) in analysis.clusters.iter().enumerate() {
        if !c.is_canonical() || skip.contains(&idx) {
            continue;
        }
        let projected: Vec<QVector> = c.candidate_vectors().iter().map(|w| project(w)).collect();
        let scale = analysis.element.mat.frob_norm().max(1.0);
        let relevant: Vec<QVector> = projected
            .into_iter()
            .filter(|v| qvec::norm(v) > 1e-6 * scale)
            .collect();
        if relevant.is_empty() {
            continue;
        }
        for (v, sign) in form_orthonormalize(ctx, &relevant)? {
            if sign < 0.0 {
                return Err(Error::IllConditioned(
                    "complement of the null pair contains a negative direction".into(),
                ));
            }
            out.push((v, c.center));
        }
    }
    if out.len() != expected {
        return Err(Error::IllConditioned(format!(
            "found {} compact directions, expected {expected}",
            out.len()
        )));
    }
    out.sort_by(|a, b| {
        a.1.re
            .partial_cmp(&b.1.re)
            .unwrap()
            .then(a.1.im.partial_cmp(&b.1.im).unwrap())
    });
    Ok(out)
}

fn hyperbolic_form(analysis: &Analysis, eigen_classes: Vec<EigenClass>) -> Result<IsometryClass> {
    let ctx = analysis.element.ctx;
    let dim = analysis.element.dim();
    let canonical: Vec<usize> = (0..analysis.clusters.len())
        .filter(|&i| analysis.clusters[i].is_canonical())
        .collect();
    let outside: Vec<usize> = canonical
        .iter()
        .copied()
        .filter(|&i| analysis.clusters[i].center.norm() > 1.0 + UNIT_BAND_OUTER)
        .collect();
    let inside: Vec<usize> = canonical
        .iter()
        .copied()
        .filter(|&i| analysis.clusters[i].center.norm() < 1.0 - UNIT_BAND_OUTER)
        .collect();
    let (&[up], &[down]) = (outside.as_slice(), inside.as_slice()) else {
        return Err(Error::IllConditioned(
            "hyperbolic element must have exactly one expanding and one contracting class".into(),
        ));
    };
    let (cu, cd) = (&analysis.clusters[up], &analysis.clusters[down]);
    if cu.quaternionic_dim() != 1 || cd.quaternionic_dim() != 1 || cu.is_real() != cd.is_real() {
        return Err(Error::IllConditioned("null eigenvalues are not a reciprocal pair".into()));
    }
    let r = (cu.center.norm() / cd.center.norm()).sqrt();
    let theta = if cu.is_real() {
        if cu.center.re > 0.0 {
            0.0
        } else {
            std::f64::consts::PI
        }
    } else {
        0.5 * (cu.center.arg() + cd.center.arg())
    };

    let e0 = dominant_vector(cu);
    let vm = dominant_vector(cd);
    let p = ctx.inner(&e0, &vm);
    if p.norm() < 1e-9 * qvec::norm(&e0) * qvec::norm(&vm) {
        return Err(Error::IllConditioned("null eigenvectors are orthogonal".into()));
    }
    let e1 = qvec::scale(&vm, -p.inv());

    let compact = compact_basis(
        analysis,
        |w| project_off_null_pair(ctx, w, &e0, &e1),
        &[up, down],
        dim - 2,
    )?;
    let mut cols = vec![e0, e1];
    cols.extend(compact.iter().map(|c| c.0.clone()));
    let basis = QMatrix::from_columns(&cols);
    let compact_diag: Vec<Complex64> = compact.iter().map(|c| c.1).collect();
    let normal_form = hyperbolic_block(r, theta).direct_sum(&QMatrix::complex_diag(&compact_diag));
    let params = NormalFormData {
        lambda: Some(Complex64::from_polar(r, theta)),
        r: Some(r),
        theta: Some(theta),
        compact: compact_diag,
        ..Default::default()
    };
    Ok(certify(
        analysis,
        Kind::Hyperbolic,
        basis,
        FormContext::Siegel,
        normal_form,
        params,
        eigen_classes,
    ))
}

/// Parameters of a parabolic normal form.
#[derive(Clone, Debug, Serialize)]
pub struct ParabolicNormalForm {
    #[serde(with = "complex_serde")]
    pub lambda: Complex64,
    pub s: Quaternion,
    /// `None` for degree 2.
    pub a: Option<Quaternion>,
    /// Diagonal of the compact block `B`.
    #[serde(with = "complex_vec_serde")]
    pub compact: Vec<Complex64>,
    #[serde(with = "qmatrix_serde")]
    pub compact_block: QMatrix,
    #[serde(with = "qmatrix_serde")]
    pub conjugator: QMatrix,
    pub residual: f64,
}

/// Normal form parameters `(λ, s, a, B)` of a parabolic element.
pub fn normal_form_parabolic(g: &GroupElement, tol: f64) -> Result<ParabolicNormalForm> {
    let class = classify(g, tol)?;
    if !class.kind.is_parabolic() {
        return Err(Error::WrongContext(format!("element is {}, not parabolic", class.kind)));
    }
    let p = &class.params;
    Ok(ParabolicNormalForm {
        lambda: p.lambda.expect("parabolic lambda"),
        s: p.s.expect("parabolic s"),
        a: p.a,
        compact: p.compact.clone(),
        compact_block: QMatrix::complex_diag(&p.compact),
        conjugator: class.conjugator.clone(),
        residual: class.normal_form_residual,
    })
}

fn parabolic_form(analysis: &Analysis, kind: Kind, eigen_classes: Vec<EigenClass>) -> Result<IsometryClass> {
    let ctx = analysis.element.ctx;
    let dim = analysis.element.dim();
    let degree = analysis.degree;
    let nil_pow = analysis.nilpotent.pow(degree - 1);

    // generic vector of the null class: largest image under N^{deg-1}
    let mut best: Option<(usize, QVector, f64)> = None;
    for (idx, c) in analysis.clusters.iter().enumerate() {
        if !c.is_canonical() {
            continue;
        }
        for x in c.candidate_vectors() {
            let nx = qvec::norm(&x);
            if nx == 0.0 {
                continue;
            }
            let ratio = qvec::norm(&nil_pow.mul_vec(&x)) / nx;
            if best.as_ref().map_or(true, |b| ratio > b.2) {
                best = Some((idx, x, ratio));
            }
        }
    }
    let (null_idx, x, _) = best.ok_or_else(|| Error::IllConditioned("no null eigenvector".into()))?;
    let null_cluster = &analysis.clusters[null_idx];
    let lambda = null_cluster.center;
    let real_lambda = null_cluster.is_real();
    let x = qvec::scale(&x, Quaternion::real(1.0 / qvec::norm(&x)));

    let (cols, s, a) = if degree == 2 {
        let f = analysis.apply_nilpotent(&x);
        let p = ctx.inner(&x, &f);
        let c = -p.inv();
        let t = p.inv() * (-0.5 * ctx.inner(&x, &x).re());
        let mut e0 = qvec::add_scaled(&x, &f, t);
        let mut e1 = qvec::scale(&f, c);
        let mut s = -p.im();
        if real_lambda {
            let (r, y) = similarity_conjugator(s)?;
            e0 = qvec::scale(&e0, y);
            e1 = qvec::scale(&e1, y);
            s = Quaternion::new(0.0, r, 0.0, 0.0);
        } else {
            s = Quaternion::new(0.0, s.x, 0.0, 0.0);
        }
        (vec![e0, e1], s, None)
    } else {
        let f1 = analysis.apply_nilpotent(&x);
        let f2 = analysis.apply_nilpotent(&f1);
        let p = ctx.inner(&x, &f2).re();
        let q1 = ctx.inner(&f1, &f1).re();
        if !(p < 0.0 && q1 > 0.0) {
            return Err(Error::IllConditioned("degenerate non-vertical translation".into()));
        }
        let xf1 = ctx.inner(&x, &f1);
        let kappa = -1.0 / p;
        let rho = 1.0 / q1.sqrt();
        let tau = xf1 * (-1.0 / p);
        let nu = -ctx.inner(&x, &x).re() / (2.0 * p);
        let mut e1 = qvec::scale(&f2, Quaternion::real(kappa));
        let mut e2 = qvec::scale(&qvec::add_scaled(&f1, &f2, tau), Quaternion::real(rho));
        let mut e0 = qvec::add_scaled(&x, &f2, Quaternion::real(nu));
        let a = Quaternion::real(q1.sqrt());
        let mut s = -xf1;
        if real_lambda && s.im_norm() > 1e-14 * s.norm().max(1.0) {
            let (r, y) = similarity_conjugator(s.im())?;
            e0 = qvec::scale(&e0, y);
            e1 = qvec::scale(&e1, y);
            e2 = qvec::scale(&e2, y);
            s = Quaternion::new(s.re(), r, 0.0, 0.0);
        } else if !real_lambda {
            s = Quaternion::new(s.w, s.x, 0.0, 0.0);
        }
        (vec![e0, e1, e2], s, Some(a))
    };

    let project = |w: &[Quaternion]| {
        let mut v = project_off_null_pair(ctx, w, &cols[0], &cols[1]);
        if degree == 3 {
            v = qvec::sub_scaled(&v, &cols[2], ctx.inner(&cols[2], w));
        }
        v
    };
    let compact = compact_basis(analysis, project, &[], dim - degree as usize)?;
    let compact_diag: Vec<Complex64> = compact.iter().map(|c| c.1).collect();
    let mut all = cols;
    all.extend(compact.iter().map(|c| c.0.clone()));
    let basis = QMatrix::from_columns(&all);
    let block = match a {
        None => vertical_block(lambda, s),
        Some(a) => non_vertical_block(lambda, s, a),
    };
    let normal_form = block.direct_sum(&QMatrix::complex_diag(&compact_diag));
    let params = NormalFormData {
        lambda: Some(lambda),
        s: Some(s),
        a,
        compact: compact_diag,
        ..Default::default()
    };
    Ok(certify(
        analysis,
        kind,
        basis,
        FormContext::Siegel,
        normal_form,
        params,
        eigen_classes,
    ))
}

/// Data deciding conjugacy: two elements of the same group are conjugate iff
/// their invariants agree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugacyInvariant {
    pub kind: Kind,
    /// Negative-type class of an elliptic element.
    #[serde(with = "complex_opt_serde", default)]
    pub negative_class: Option<Complex64>,
    /// Null class of a parabolic element.
    #[serde(with = "complex_opt_serde", default)]
    pub null_class: Option<Complex64>,
    /// Sign of `s / i` for vertical-type parabolics with non-real `λ`.
    #[serde(default)]
    pub vertical_sign: Option<i8>,
    /// Remaining classes with multiplicities, sorted. For hyperbolic elements
    /// these include the two null classes.
    pub classes: Vec<EigenClassKey>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenClassKey {
    #[serde(with = "complex_serde")]
    pub rep: Complex64,
    pub multiplicity: usize,
}

fn class_keys(values: &[Complex64]) -> Vec<EigenClassKey> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    let mut keys: Vec<EigenClassKey> = Vec::new();
    for v in sorted {
        match keys.last_mut() {
            Some(k) if (k.rep - v).norm() < 1e-6 => k.multiplicity += 1,
            _ => keys.push(EigenClassKey { rep: v, multiplicity: 1 }),
        }
    }
    keys
}

impl ConjugacyInvariant {
    /// Agreement up to `tol` in every eigenvalue.
    pub fn approx_eq(&self, other: &ConjugacyInvariant, tol: f64) -> bool {
        let close = |a: Option<Complex64>, b: Option<Complex64>| match (a, b) {
            (None, None) => true,
            (Some(a), Some(b)) => (a - b).norm() < tol,
            _ => false,
        };
        self.kind == other.kind
            && close(self.negative_class, other.negative_class)
            && close(self.null_class, other.null_class)
            && self.vertical_sign == other.vertical_sign
            && self.classes.len() == other.classes.len()
            && self
                .classes
                .iter()
                .zip(&other.classes)
                .all(|(a, b)| a.multiplicity == b.multiplicity && (a.rep - b.rep).norm() < tol)
    }
}

pub fn conjugacy_invariant(g: &GroupElement, tol: f64) -> Result<ConjugacyInvariant> {
    Ok(invariant_of(&classify(g, tol)?))
}

pub fn invariant_of(class: &IsometryClass) -> ConjugacyInvariant {
    let p = &class.params;
    let mut inv = ConjugacyInvariant {
        kind: class.kind,
        negative_class: None,
        null_class: None,
        vertical_sign: None,
        classes: Vec::new(),
    };
    match class.kind {
        Kind::Identity => {}
        Kind::Elliptic => {
            inv.negative_class = p.compact.first().copied();
            inv.classes = class_keys(&p.compact[1..]);
        }
        Kind::Hyperbolic => {
            let r = p.r.unwrap_or(1.0);
            let theta = p.theta.unwrap_or(0.0);
            let mut all = vec![Complex64::from_polar(r, theta), Complex64::from_polar(1.0 / r, theta)];
            all.extend_from_slice(&p.compact);
            inv.classes = class_keys(&all);
        }
        _ => {
            let lambda = p.lambda.unwrap_or(Complex64::new(1.0, 0.0));
            inv.null_class = Some(lambda);
            if class.unipotent_degree == 2 && lambda.im > 0.0 {
                inv.vertical_sign = p.s.map(|s| if s.x >= 0.0 { 1 } else { -1 });
            }
            inv.classes = class_keys(&p.compact);
        }
    }
    inv
}

/// `‖g* F g - F‖_F` of a normal form, as a convenience for callers
/// checking the stated constraints.
pub fn normal_form_membership(class: &IsometryClass) -> f64 {
    membership_residual(&class.normal_form, class.normal_context).unwrap_or(f64::INFINITY)
}
