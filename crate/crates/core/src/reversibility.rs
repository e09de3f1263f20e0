//! Reversers, strong reversibility and involution factorizations.
//!
//! All constructions happen in normal-form coordinates, where the reversers
//! are small explicit block matrices, and are pulled back through the
//! conjugator computed by [`crate::classify`] or [`crate::spectral::diagonalize`].
//! Each result is certified by residuals; a construction whose residuals do
//! not certify is reported as ill-conditioned instead of being returned.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, IsometryClass, Kind};
use crate::io::{element_opt_serde, element_serde, element_vec_opt_serde};
use crate::qmat::{membership_residual, FormContext, GroupElement, QMatrix};
use crate::quat::Quaternion;
use crate::spectral::{diagonalize, Diagonalization};
use crate::{Error, Result};

/// Residual thresholds used when certifying a fresh construction.
const BUILD_MEMBERSHIP: f64 = 1e-9;
const BUILD_REVERSAL: f64 = 1e-8;
const BUILD_SQUARE: f64 = 1e-9;

/// `‖h g h^-1 - g^-1‖_F`, with both inverses computed without using any form.
pub fn reversal_residual(g: &QMatrix, h: &QMatrix) -> f64 {
    match (g.inverse(), h.inverse()) {
        (Ok(gi), Ok(hi)) => (&(h * g) * &hi).dist(&gi),
        _ => f64::INFINITY,
    }
}

/// `‖h² - I‖_F`.
pub fn involution_residual(h: &QMatrix) -> f64 {
    (h * h).dist(&QMatrix::identity(h.rows()))
}

/// `‖h² + I‖_F`.
pub fn anti_involution_residual(h: &QMatrix) -> f64 {
    (h * h).add(&QMatrix::identity(h.rows())).frob_norm()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReverserSquare {
    #[serde(rename = "+I")]
    PlusI,
    #[serde(rename = "-I")]
    MinusI,
    #[serde(rename = "other")]
    Other,
}

impl ReverserSquare {
    pub fn of(h: &QMatrix, tol: f64) -> Self {
        if involution_residual(h) < tol {
            ReverserSquare::PlusI
        } else if anti_involution_residual(h) < tol {
            ReverserSquare::MinusI
        } else {
            ReverserSquare::Other
        }
    }
}

fn j_scalar(dim: usize) -> QMatrix {
    QMatrix::scalar(dim, Quaternion::J)
}

fn check_context(g: &GroupElement, compact: bool) -> Result<()> {
    match (compact, g.ctx.is_hyperbolic()) {
        (true, true) => Err(Error::WrongContext("expected an element of Sp(n)".into())),
        (false, false) => Err(Error::WrongContext("expected an element of Sp(n,1)".into())),
        _ => Ok(()),
    }
}

fn pull_back_diag(diag: &Diagonalization, element_ctx: FormContext, h: &QMatrix) -> QMatrix {
    &(&diag.basis * h) * &diag.basis_inverse(element_ctx)
}

/// Certifies a reverser (and optionally an involution) before handing it out.
fn certified(g: &GroupElement, h: QMatrix, involution: bool) -> Result<GroupElement> {
    let membership = membership_residual(&h, g.ctx)?;
    let reversal = reversal_residual(&g.mat, &h);
    let square = if involution { involution_residual(&h) } else { 0.0 };
    if !(membership < BUILD_MEMBERSHIP && reversal < BUILD_REVERSAL && square < BUILD_SQUARE) {
        return Err(Error::IllConditioned(format!(
            "constructed matrix does not certify (membership {membership:.1e}, reversal {reversal:.1e}, square {square:.1e})"
        )));
    }
    Ok(GroupElement::new_unchecked(h, g.ctx))
}

/// Reverser of `g ∈ Sp(n)`: `u (jI) u^-1` for a diagonalizing `u`. Squares to `-I`.
pub fn reverser_spn(g: &GroupElement, tol: f64) -> Result<GroupElement> {
    check_context(g, true)?;
    let diag = diagonalize(g, tol)?;
    certified(g, pull_back_diag(&diag, g.ctx, &j_scalar(g.dim())), false)
}

/// `((0, j), (-j, 0))`: an involution sending `diag(λ, λ)` to `diag(λ̄, λ̄)`.
pub fn pair_block() -> QMatrix {
    let mut h = QMatrix::zeros(2, 2);
    h[(0, 1)] = Quaternion::J;
    h[(1, 0)] = -Quaternion::J;
    h
}

fn same_class(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < 1e-6
}

/// Involution reversing `diag(d)` when every non-real class occurs an even
/// number of times; equal classes must be adjacent. Otherwise the offending
/// class is returned.
pub fn diagonal_witness(d: &[Complex64]) -> std::result::Result<QMatrix, Complex64> {
    let mut h = QMatrix::identity(d.len());
    let mut k = 0;
    while k < d.len() {
        let mut end = k + 1;
        while end < d.len() && same_class(d[end], d[k]) {
            end += 1;
        }
        if d[k].im != 0.0 {
            if (end - k) % 2 == 1 {
                return Err(d[k]);
            }
            let mut p = k;
            while p < end {
                h[(p, p)] = Quaternion::ZERO;
                h[(p + 1, p + 1)] = Quaternion::ZERO;
                h[(p, p + 1)] = Quaternion::J;
                h[(p + 1, p)] = -Quaternion::J;
                p += 2;
            }
        }
        k = end;
    }
    Ok(h)
}

/// Which clause of the strong-reversibility criterion decided the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionTrace {
    /// 0 for `Sp(n)`; 1 hyperbolic, 2 elliptic, 3 vertical, 4 non-vertical,
    /// 5 non-unipotent parabolic for `Sp(n,1)`.
    pub clause: u8,
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl CriterionTrace {
    fn new(clause: u8, name: &str, holds: bool, detail: impl Into<String>) -> Self {
        CriterionTrace {
            clause,
            name: name.into(),
            holds,
            detail: detail.into(),
        }
    }
}

/// Strong-reversibility verdict with its trace and, when positive, an
/// involution `w` with `w g w = g^-1`.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub strongly_reversible: bool,
    pub criterion: CriterionTrace,
    pub witness: Option<GroupElement>,
}

fn compact_detail(d: &[Complex64]) -> std::result::Result<QMatrix, String> {
    diagonal_witness(d).map_err(|c| format!("class {:.6}{:+.6}i has odd multiplicity", c.re, c.im))
}

/// Strong reversibility in `Sp(n)`: every class is `±1` or has even multiplicity.
pub fn strongly_reversible_spn(g: &GroupElement, tol: f64) -> Result<Verdict> {
    check_context(g, true)?;
    let diag = diagonalize(g, tol)?;
    match compact_detail(&diag.diagonal) {
        Ok(w) => {
            let witness = certified(g, pull_back_diag(&diag, g.ctx, &w), true)?;
            Ok(Verdict {
                strongly_reversible: true,
                criterion: CriterionTrace::new(0, "compact", true, "every class is ±1 or has even multiplicity"),
                witness: Some(witness),
            })
        }
        Err(detail) => Ok(Verdict {
            strongly_reversible: false,
            criterion: CriterionTrace::new(0, "compact", false, detail),
            witness: None,
        }),
    }
}

/// Factors `g ∈ Sp(2m)` into four involutions `f1 f2 f3 f4 = g`.
///
/// With `Λ_k = λ_1⋯λ_k` and `β² = Λ_n`, the diagonal `diag(λ)` splits as
/// `α_1 α_2` where `α_1` holds the pairs `(Λ_{2t+1} β̄, conj(Λ_{2t+1}) β)` and
/// `α_2` holds `β` at both ends and the pairs `(Λ_{2t} β̄, conj(Λ_{2t}) β)` in
/// between. Each `α_i` is a product of two involutions `(α_i σ_i) σ_i`.
pub fn four_involution_factorization(g: &GroupElement, tol: f64) -> Result<Vec<GroupElement>> {
    check_context(g, true)?;
    let n = g.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension { n });
    }
    let diag = diagonalize(g, tol)?;
    let lam = &diag.diagonal;
    let mut partial = Vec::with_capacity(n + 1);
    partial.push(Complex64::new(1.0, 0.0));
    for k in 0..n {
        let next = partial[k] * lam[k];
        partial.push(next / next.norm());
    }
    let beta = partial[n].sqrt();
    let m = n / 2;
    let mut a1 = vec![Complex64::new(0.0, 0.0); n];
    let mut a2 = vec![Complex64::new(0.0, 0.0); n];
    for t in 0..m {
        a1[2 * t] = partial[2 * t + 1] * beta.conj();
        a1[2 * t + 1] = partial[2 * t + 1].conj() * beta;
    }
    a2[0] = beta;
    a2[n - 1] = beta;
    for t in 1..m {
        a2[2 * t - 1] = partial[2 * t] * beta.conj();
        a2[2 * t] = partial[2 * t].conj() * beta;
    }
    let swap = |h: &mut QMatrix, p: usize, q: usize| {
        h[(p, p)] = Quaternion::ZERO;
        h[(q, q)] = Quaternion::ZERO;
        h[(p, q)] = Quaternion::ONE;
        h[(q, p)] = Quaternion::ONE;
    };
    let mut s1 = QMatrix::identity(n);
    for t in 0..m {
        swap(&mut s1, 2 * t, 2 * t + 1);
    }
    let mut s2 = QMatrix::identity(n);
    s2[(0, 0)] = Quaternion::ZERO;
    s2[(n - 1, n - 1)] = Quaternion::ZERO;
    s2[(0, n - 1)] = Quaternion::J;
    s2[(n - 1, 0)] = -Quaternion::J;
    for t in 1..m {
        swap(&mut s2, 2 * t - 1, 2 * t);
    }
    let f1 = &QMatrix::complex_diag(&a1) * &s1;
    let f3 = &QMatrix::complex_diag(&a2) * &s2;
    let factors: Vec<GroupElement> = [f1, s1, f3, s2]
        .iter()
        .map(|f| GroupElement::new_unchecked(pull_back_diag(&diag, g.ctx, f), g.ctx))
        .collect();
    let product = factors.iter().fold(QMatrix::identity(n), |acc, f| &acc * &f.mat);
    let worst_square = factors.iter().map(|f| involution_residual(&f.mat)).fold(0.0, f64::max);
    let product_residual = product.dist(&g.mat);
    if !(worst_square < BUILD_SQUARE && product_residual < BUILD_REVERSAL) {
        return Err(Error::IllConditioned(format!(
            "factorization does not certify (square {worst_square:.1e}, product {product_residual:.1e})"
        )));
    }
    Ok(factors)
}

/// `h_NV = ((1,0,0), (|d|²/2, 1, d), (-d̄, 0, -1))` with `d = (Re(s) - s) a^-1`,
/// an involution reversing `u_NV(s, a)`.
pub fn h_nv(s: Quaternion, a: Quaternion) -> QMatrix {
    let d = (Quaternion::real(s.re()) - s) * a.inv();
    let mut h = QMatrix::identity(3);
    h[(1, 0)] = Quaternion::real(d.norm_sqr() / 2.0);
    h[(1, 2)] = d;
    h[(2, 0)] = -d.conj();
    h[(2, 2)] = Quaternion::real(-1.0);
    h
}

/// Reverser for the normal form of `class`, in normal-form coordinates.
/// `projective` selects the variant squaring to `±I`.
fn normal_reverser(class: &IsometryClass, projective: bool) -> QMatrix {
    let dim = class.normal_form.rows();
    let p = &class.params;
    match class.kind {
        Kind::Identity | Kind::Elliptic => j_scalar(dim),
        Kind::Hyperbolic => {
            let mut h = QMatrix::zeros(2, 2);
            h[(0, 1)] = Quaternion::J;
            h[(1, 0)] = Quaternion::J;
            h.direct_sum(&j_scalar(dim - 2))
        }
        Kind::Vertical => {
            let rest = if projective { j_scalar(dim - 2) } else { QMatrix::identity(dim - 2) };
            j_scalar(2).direct_sum(&rest)
        }
        Kind::NonUnipotent2 => j_scalar(dim),
        Kind::NonVertical => {
            h_nv(p.s.unwrap_or_default(), p.a.unwrap_or(Quaternion::ONE)).direct_sum(&QMatrix::identity(dim - 3))
        }
        Kind::NonUnipotent3 => QMatrix::diag(&[Quaternion::J, Quaternion::J, -Quaternion::J]).direct_sum(&j_scalar(dim - 3)),
    }
}

fn classified(g: &GroupElement, tol: f64) -> Result<IsometryClass> {
    check_context(g, false)?;
    classify(g, tol)
}

/// Reverser of `g ∈ Sp(n,1)` (ball or Siegel form).
pub fn reverser_spn1(g: &GroupElement, tol: f64) -> Result<GroupElement> {
    let class = classified(g, tol)?;
    reverser_from_class(g, &class, false)
}

/// Reverser whose square is `±I`, so `g` is a product of two involutions in
/// `PSp(n,1)`.
pub fn projective_reverser(g: &GroupElement, tol: f64) -> Result<GroupElement> {
    let class = classified(g, tol)?;
    reverser_from_class(g, &class, true)
}

fn reverser_from_class(g: &GroupElement, class: &IsometryClass, projective: bool) -> Result<GroupElement> {
    let h = class.pull_back(&normal_reverser(class, projective));
    certified(g, h, false)
}

/// Strong reversibility in `Sp(n,1)` with an involution witness when it holds.
pub fn strongly_reversible_spn1(g: &GroupElement, tol: f64) -> Result<Verdict> {
    let class = classified(g, tol)?;
    verdict_from_class(g, &class)
}

fn verdict_from_class(g: &GroupElement, class: &IsometryClass) -> Result<Verdict> {
    let p = &class.params;
    let dim = class.normal_form.rows();
    let (trace, witness) = match class.kind {
        Kind::Identity => (
            CriterionTrace::new(2, "elliptic", true, "identity"),
            Some(QMatrix::identity(dim)),
        ),
        Kind::Elliptic => {
            let d = &p.compact;
            let lead = d[0];
            if lead.im != 0.0 {
                (
                    CriterionTrace::new(
                        2,
                        "elliptic",
                        false,
                        format!("negative-type class {:.6}{:+.6}i is not ±1", lead.re, lead.im),
                    ),
                    None,
                )
            } else {
                match compact_detail(&d[1..]) {
                    Ok(w) => (
                        CriterionTrace::new(2, "elliptic", true, "negative-type class is ±1 and positive classes pair up"),
                        Some(QMatrix::identity(1).direct_sum(&w)),
                    ),
                    Err(detail) => (CriterionTrace::new(2, "elliptic", false, detail), None),
                }
            }
        }
        Kind::Hyperbolic => {
            let theta = p.theta.unwrap_or(0.0);
            if theta != 0.0 && theta != std::f64::consts::PI {
                (
                    CriterionTrace::new(1, "hyperbolic", false, format!("null eigenvalues are not real (θ = {theta:.6})")),
                    None,
                )
            } else {
                match compact_detail(&p.compact) {
                    Ok(w) => {
                        let mut swap = QMatrix::zeros(2, 2);
                        swap[(0, 1)] = Quaternion::ONE;
                        swap[(1, 0)] = Quaternion::ONE;
                        (
                            CriterionTrace::new(1, "hyperbolic", true, "null eigenvalues are real and positive classes pair up"),
                            Some(swap.direct_sum(&w)),
                        )
                    }
                    Err(detail) => (CriterionTrace::new(1, "hyperbolic", false, detail), None),
                }
            }
        }
        Kind::Vertical => (
            CriterionTrace::new(3, "vertical", false, "vertical translations are not strongly reversible"),
            None,
        ),
        Kind::NonVertical => (
            CriterionTrace::new(4, "non-vertical", true, "non-vertical translations are strongly reversible"),
            Some(normal_reverser(class, false)),
        ),
        Kind::NonUnipotent2 | Kind::NonUnipotent3 => {
            let lambda = p.lambda.unwrap_or(Complex64::new(1.0, 0.0));
            if lambda.im != 0.0 {
                (
                    CriterionTrace::new(
                        5,
                        "non-unipotent",
                        false,
                        format!("null class {:.6}{:+.6}i is not ±1", lambda.re, lambda.im),
                    ),
                    None,
                )
            } else if class.kind == Kind::NonUnipotent2 {
                (
                    CriterionTrace::new(5, "non-unipotent", false, "unipotent part has minimal polynomial (x-1)^2"),
                    None,
                )
            } else {
                match compact_detail(&p.compact) {
                    Ok(w) => (
                        CriterionTrace::new(5, "non-unipotent", true, "null class is ±1, degree 3, positive classes pair up"),
                        Some(h_nv(p.s.unwrap_or_default(), p.a.unwrap_or(Quaternion::ONE)).direct_sum(&w)),
                    ),
                    Err(detail) => (CriterionTrace::new(5, "non-unipotent", false, detail), None),
                }
            }
        }
    };
    let witness = match witness {
        Some(w) => Some(certified(g, class.pull_back(&w), true)?),
        None => None,
    };
    Ok(Verdict {
        strongly_reversible: witness.is_some(),
        criterion: trace,
        witness,
    })
}

/// Numbers backing a report. All are recomputed by [`verify_report`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub element_membership: f64,
    pub reverser_membership: f64,
    pub reversal: f64,
    /// `‖h² - I‖` or `‖h² + I‖` according to `reverser_square`; absent for `other`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reverser_square: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_membership: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_square: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_reversal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor_memberships: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor_squares: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorization_product: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReversibilityReport {
    #[serde(with = "element_serde")]
    pub element: GroupElement,
    /// Classification of `Sp(n,1)` elements; absent for `Sp(n)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(with = "element_serde")]
    pub reverser: GroupElement,
    pub reverser_square: ReverserSquare,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strongly_reversible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<CriterionTrace>,
    #[serde(with = "element_opt_serde", default, skip_serializing_if = "Option::is_none")]
    pub involution_witness: Option<GroupElement>,
    #[serde(with = "element_vec_opt_serde", default, skip_serializing_if = "Option::is_none")]
    pub factorization: Option<Vec<GroupElement>>,
    pub residuals: Residuals,
}

/// What a report should contain besides the reverser.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReportOptions {
    pub witness: bool,
    pub factorization: bool,
    /// Use the reverser squaring to `±I` (only differs for vertical translations).
    pub projective: bool,
}

/// Builds a report for `g`, choosing the `Sp(n)` or `Sp(n,1)` constructions
/// by context.
pub fn build_report(g: &GroupElement, tol: f64, opts: ReportOptions) -> Result<ReversibilityReport> {
    let element_membership = membership_residual(&g.mat, g.ctx)?;
    if element_membership >= tol {
        return Err(Error::NotInGroup {
            context: g.ctx,
            residual: element_membership,
        });
    }
    let (kind, reverser, verdict) = if g.ctx.is_hyperbolic() {
        let class = classify(g, tol)?;
        let h = reverser_from_class(g, &class, opts.projective)?;
        let verdict = if opts.witness { Some(verdict_from_class(g, &class)?) } else { None };
        (Some(class.kind), h, verdict)
    } else {
        let h = reverser_spn(g, tol)?;
        let verdict = if opts.witness { Some(strongly_reversible_spn(g, tol)?) } else { None };
        (None, h, verdict)
    };
    let factorization = if opts.factorization {
        if g.ctx.is_hyperbolic() {
            return Err(Error::WrongContext("four-involution factorization is for Sp(2m)".into()));
        }
        Some(four_involution_factorization(g, tol)?)
    } else {
        None
    };
    let mut report = ReversibilityReport {
        element: g.clone(),
        kind,
        reverser_square: ReverserSquare::of(&reverser.mat, BUILD_SQUARE),
        reverser,
        strongly_reversible: verdict.as_ref().map(|v| v.strongly_reversible),
        criterion: verdict.as_ref().map(|v| v.criterion.clone()),
        involution_witness: verdict.and_then(|v| v.witness),
        factorization,
        residuals: Residuals::default(),
    };
    report.residuals = compute_residuals(&report);
    Ok(report)
}

fn compute_residuals(report: &ReversibilityReport) -> Residuals {
    let g = &report.element;
    let member = |m: &QMatrix| membership_residual(m, g.ctx).unwrap_or(f64::INFINITY);
    let h = &report.reverser.mat;
    Residuals {
        element_membership: member(&g.mat),
        reverser_membership: member(h),
        reversal: reversal_residual(&g.mat, h),
        reverser_square: match report.reverser_square {
            ReverserSquare::PlusI => Some(involution_residual(h)),
            ReverserSquare::MinusI => Some(anti_involution_residual(h)),
            ReverserSquare::Other => None,
        },
        witness_membership: report.involution_witness.as_ref().map(|w| member(&w.mat)),
        witness_square: report.involution_witness.as_ref().map(|w| involution_residual(&w.mat)),
        witness_reversal: report.involution_witness.as_ref().map(|w| reversal_residual(&g.mat, &w.mat)),
        factor_memberships: report
            .factorization
            .as_ref()
            .map(|fs| fs.iter().map(|f| member(&f.mat)).collect()),
        factor_squares: report
            .factorization
            .as_ref()
            .map(|fs| fs.iter().map(|f| involution_residual(&f.mat)).collect()),
        factorization_product: report.factorization.as_ref().map(|fs| {
            fs.iter()
                .fold(QMatrix::identity(g.dim()), |acc, f| &acc * &f.mat)
                .dist(&g.mat)
        }),
    }
}

/// One recomputed check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub passed: bool,
    pub clauses: Vec<Clause>,
}

impl Certification {
    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

/// Recomputes every claim of a report from its matrices. Memberships and
/// squares are checked at `tol`, reversals and products at `10 tol`.
pub fn verify_report(report: &ReversibilityReport, tol: f64) -> Certification {
    let r = compute_residuals(report);
    let g = &report.element;
    let mut clauses = Vec::new();
    let mut push = |name: &str, value: f64, threshold: f64| {
        clauses.push(Clause {
            name: name.into(),
            passed: value < threshold,
            value,
            threshold,
        });
    };
    let loose = 10.0 * tol;
    let shapes_ok = |m: &QMatrix| m.rows() == g.dim() && m.cols() == g.dim();
    let all_shapes = shapes_ok(&report.reverser.mat)
        && report.involution_witness.iter().all(|w| shapes_ok(&w.mat))
        && report.factorization.iter().flatten().all(|f| shapes_ok(&f.mat));
    push("shapes", if all_shapes { 0.0 } else { f64::INFINITY }, 1.0);
    if !all_shapes {
        return Certification { passed: false, clauses };
    }
    push("element_membership", r.element_membership, tol);
    push("reverser_membership", r.reverser_membership, tol);
    push("reversal", r.reversal, loose);
    let actual_square = ReverserSquare::of(&report.reverser.mat, tol);
    push(
        "reverser_square",
        r.reverser_square.unwrap_or(0.0),
        if actual_square == report.reverser_square { tol.max(f64::MIN_POSITIVE) } else { 0.0 },
    );
    if let Some(w) = &report.involution_witness {
        let _ = w;
        push("witness_membership", r.witness_membership.unwrap_or(f64::INFINITY), tol);
        push("witness_square", r.witness_square.unwrap_or(f64::INFINITY), tol);
        push("witness_reversal", r.witness_reversal.unwrap_or(f64::INFINITY), loose);
    }
    let consistent = match (report.strongly_reversible, &report.involution_witness) {
        (Some(false), Some(_)) | (Some(true), None) => false,
        _ => true,
    };
    push("verdict_consistency", if consistent { 0.0 } else { f64::INFINITY }, 1.0);
    if report.factorization.is_some() {
        for (k, (m, s)) in r
            .factor_memberships
            .iter()
            .flatten()
            .zip(r.factor_squares.iter().flatten())
            .enumerate()
        {
            push(&format!("factor_{k}_membership"), *m, tol);
            push(&format!("factor_{k}_square"), *s, tol);
        }
        push("factorization_product", r.factorization_product.unwrap_or(f64::INFINITY), loose);
    }
    let passed = clauses.iter().all(|c| c.passed);
    Certification { passed, clauses }
}
