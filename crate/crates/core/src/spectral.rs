//! Right-eigenvalue similarity classes, their types, diagonalization of
//! semisimple elements and the Jordan decomposition `g = g_s g_u`.
//!
//! All numerics happen on the complex adjoint `φ(g)`. Its eigenvalues are
//! grouped into clusters (a class `[λ]` with `λ` non-real shows up as a
//! cluster at `λ` and a mirror cluster at `λ̄`; a real class gives a single
//! self-conjugate cluster). Each cluster gets its Riesz projector, computed by
//! trapezoidal quadrature of the resolvent on a circle that separates it from
//! the rest of the spectrum. The projectors give the semisimple part
//! `Σ μ_c P_c` and, through the converter between `C^{2N}` and `H^N`, bases of
//! the quaternionic eigenspaces.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::io::complex_serde;
use crate::qmat::{form_inverse, intertwiner_inverse, membership_residual, qvec, CMatrix, FormContext, GroupElement, QMatrix, QVector};
use crate::quat::Quaternion;
use crate::{Error, Result};

/// Eigenvalues of `φ(g)` closer than this (relative to `max(1, |λ|)`) are
/// treated as one cluster.
pub const CLUSTER_RADIUS: f64 = 1e-3;

/// Eigenvalue moduli within this distance of 1 count as unit modulus.
pub const UNIT_BAND: f64 = 1e-7;

/// Moduli between [`UNIT_BAND`] and this are neither clearly unit nor clearly
/// hyperbolic and are reported as ill-conditioned.
pub const UNIT_BAND_OUTER: f64 = 1e-6;

/// Eigenvector condition number above which an element is not treated as
/// diagonalizable.
pub const SEMISIMPLE_COND: f64 = 1e8;

const CONTOUR_POINTS: usize = 64;
const NILPOTENT_ZERO: f64 = 1e-8;
const NILPOTENT_SURE: f64 = 1e-3;
const NULL_RATIO: f64 = 1e-7;
const NONDEGENERATE_RATIO: f64 = 1e-4;
const RANK_TOL: f64 = 1e-7;

/// Sign behaviour of the form on an eigenspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeomType {
    Positive,
    Negative,
    Null,
    Indefinite,
    NotApplicable,
}

/// A similarity class of right eigenvalues.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenClass {
    /// Canonical representative `a + bi`, `b >= 0`.
    #[serde(with = "complex_serde")]
    pub rep: Complex64,
    /// Quaternionic dimension of the generalized eigenspace.
    pub multiplicity: usize,
    pub geom_type: GeomType,
}

/// A group of eigenvalues of `φ(g)` with its spectral projector.
#[derive(Clone, Debug)]
pub struct Cluster {
    /// Refined eigenvalue `tr(φ(g) P) / tr(P)`; exactly real for
    /// self-conjugate clusters and snapped to the unit circle when within
    /// [`UNIT_BAND`].
    pub center: Complex64,
    /// Number of complex eigenvalues (with algebraic multiplicity).
    pub count: usize,
    pub projector: CMatrix,
}

impl Cluster {
    /// Clusters with `Im >= 0` stand for one similarity class each.
    pub fn is_canonical(&self) -> bool {
        self.center.im >= 0.0
    }

    pub fn is_real(&self) -> bool {
        self.center.im == 0.0
    }

    /// Quaternionic dimension of the generalized eigenspace.
    pub fn quaternionic_dim(&self) -> usize {
        if self.is_real() {
            self.count / 2
        } else {
            self.count
        }
    }

    /// Quaternionic vectors spanning `{v : g_s v = v μ}`, one per column of
    /// the projector (so redundant in general).
    pub fn candidate_vectors(&self) -> Vec<QVector> {
        (0..self.projector.ncols())
            .map(|c| qvec_from_complex(self.projector.column(c).as_slice()))
            .collect()
    }
}

/// Everything derived from the spectrum of `φ(g)`.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub element: GroupElement,
    pub phi: CMatrix,
    /// Sorted by `(Re, Im)` of the center.
    pub clusters: Vec<Cluster>,
    pub semisimple: QMatrix,
    pub unipotent: QMatrix,
    /// `g_u - I`.
    pub nilpotent: QMatrix,
    /// Degree of the minimal polynomial of `g_u`.
    pub degree: u32,
}

impl Analysis {
    pub fn canonical_clusters(&self) -> impl Iterator<Item = &Cluster> {
        self.clusters.iter().filter(|c| c.is_canonical())
    }

    pub fn max_modulus_deviation(&self) -> f64 {
        self.clusters
            .iter()
            .map(|c| (c.center.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `N v` where `N = g_u - I`.
    pub fn apply_nilpotent(&self, v: &[Quaternion]) -> QVector {
        self.nilpotent.mul_vec(v)
    }
}

/// Converts a complex eigenvector `w = (x; -ȳ)` of `φ(g)` into the quaternionic
/// vector `x + y j`; `φ(g) w = w λ` becomes `g v = v λ`.
pub fn qvec_from_complex(w: &[Complex64]) -> QVector {
    let n = w.len() / 2;
    (0..n)
        .map(|k| Quaternion::from_parts(w[k], -w[n + k].conj()))
        .collect()
}

/// Inverse of [`qvec_from_complex`]: the first column of `φ(v)`.
pub fn complex_from_qvec(v: &[Quaternion]) -> DVector<Complex64> {
    let n = v.len();
    DVector::from_fn(2 * n, |r, _| {
        if r < n {
            v[r].complex_part()
        } else {
            -v[r - n].j_part().conj()
        }
    })
}

/// `β m̄ β^-1` with `β = φ(jI)`.
fn beta_conjugate(m: &CMatrix) -> CMatrix {
    let n = m.nrows() / 2;
    CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| {
        let (rr, sr) = if r < n { (r + n, 1.0) } else { (r - n, -1.0) };
        let (cc, sc) = if c < n { (c + n, 1.0) } else { (c - n, -1.0) };
        m[(rr, cc)].conj() * (sr * sc)
    })
}

fn complex_eigenvalues(phi: &CMatrix) -> Result<Vec<Complex64>> {
    let dim = phi.nrows();
    let m = faer::Mat::<faer::c64>::from_fn(dim, dim, |r, c| phi[(r, c)]);
    let ev = m
        .eigenvalues()
        .map_err(|e| Error::IllConditioned(format!("eigenvalue iteration failed: {e:?}")))?;
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::IllConditioned("non-finite eigenvalue".into()));
    }
    Ok(ev)
}

/// Single-linkage clustering of eigenvalues.
fn cluster_indices(ev: &[Complex64]) -> Vec<Vec<usize>> {
    let n = ev.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut i = i;
        while p[i] != r {
            let next = p[i];
            p[i] = r;
            i = next;
        }
        r
    }
    for a in 0..n {
        for b in a + 1..n {
            let scale = ev[a].norm().max(ev[b].norm()).max(1.0);
            if (ev[a] - ev[b]).norm() <= CLUSTER_RADIUS * scale {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

fn mean(values: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut k = 0.0;
    for v in values {
        sum += v;
        k += 1.0;
    }
    sum / k
}

/// Riesz projector `(1/2πi) ∮ (z - A)^-1 dz` on the circle `|z - center| = radius`.
fn riesz_projector(a: &CMatrix, center: Complex64, radius: f64) -> Result<CMatrix> {
    let dim = a.nrows();
    let mut p = CMatrix::zeros(dim, dim);
    for k in 0..CONTOUR_POINTS {
        let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / CONTOUR_POINTS as f64;
        let e = Complex64::from_polar(radius, angle);
        let z = center + e;
        let shifted = CMatrix::from_fn(dim, dim, |r, c| if r == c { z - a[(r, c)] } else { -a[(r, c)] });
        let resolvent = shifted
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::IllConditioned("contour passes through the spectrum".into()))?;
        p += resolvent * e;
    }
    Ok(p / Complex64::new(CONTOUR_POINTS as f64, 0.0))
}

fn trace(m: &CMatrix) -> Complex64 {
    (0..m.nrows()).map(|k| m[(k, k)]).sum()
}

/// Clusters and projectors of `φ(g)`.
pub fn spectral_clusters(phi: &CMatrix) -> Result<Vec<Cluster>> {
    let dim = phi.nrows();
    let ev = complex_eigenvalues(phi)?;
    let groups = cluster_indices(&ev);

    struct Raw {
        members: Vec<usize>,
        center: Complex64,
    }
    let mut raw: Vec<Raw> = groups
        .into_iter()
        .map(|members| {
            let center = mean(members.iter().map(|&i| ev[i]));
            Raw { members, center }
        })
        .collect();
    raw.sort_by(|a, b| {
        a.center
            .re
            .partial_cmp(&b.center.re)
            .unwrap()
            .then(a.center.im.partial_cmp(&b.center.im).unwrap())
    });

    let is_real = |r: &Raw| r.center.im.abs() <= CLUSTER_RADIUS * r.center.norm().max(1.0);

    let mut clusters: Vec<Option<Cluster>> = vec![None; raw.len()];
    for (idx, r) in raw.iter().enumerate() {
        if r.center.im < 0.0 && !is_real(r) {
            continue;
        }
        let count = r.members.len();
        let projector = if raw.len() == 1 {
            CMatrix::identity(dim, dim)
        } else {
            let outside = ev
                .iter()
                .enumerate()
                .filter(|(i, _)| !r.members.contains(i))
                .map(|(_, v)| (v - r.center).norm())
                .fold(f64::INFINITY, f64::min);
            let spread = r
                .members
                .iter()
                .map(|&i| (ev[i] - r.center).norm())
                .fold(0.0, f64::max);
            let radius = 0.5 * outside;
            if spread > 0.25 * radius {
                return Err(Error::IllConditioned(format!(
                    "eigenvalue cluster near {:.6} is not separated from the rest of the spectrum",
                    r.center
                )));
            }
            riesz_projector(phi, r.center, radius)?
        };
        let tr = trace(&projector);
        if (tr.re - count as f64).abs() > 0.1 || tr.im.abs() > 0.1 {
            return Err(Error::IllConditioned(format!(
                "spectral projector near {:.6} has trace {tr:.4}, expected {count}",
                r.center
            )));
        }
        let mut center = trace(&(phi * &projector)) / Complex64::new(count as f64, 0.0);
        let real = is_real(r);
        let projector = if real {
            if count % 2 != 0 {
                return Err(Error::IllConditioned(format!(
                    "real eigenvalue {:.6} has odd complex multiplicity",
                    center.re
                )));
            }
            center.im = 0.0;
            (&projector + beta_conjugate(&projector)) * Complex64::new(0.5, 0.0)
        } else {
            projector
        };
        if (center.norm() - 1.0).abs() <= UNIT_BAND {
            center /= center.norm();
        }
        if !real {
            // mirror cluster at the conjugate eigenvalue
            let partner = raw
                .iter()
                .enumerate()
                .filter(|(_, q)| q.center.im < 0.0 && !is_real(q))
                .min_by(|(_, a), (_, b)| {
                    (a.center - r.center.conj())
                        .norm()
                        .partial_cmp(&(b.center - r.center.conj()).norm())
                        .unwrap()
                })
                .map(|(j, q)| (j, q.members.len()));
            match partner {
                Some((j, c)) if c == count => {
                    clusters[j] = Some(Cluster {
                        center: center.conj(),
                        count,
                        projector: beta_conjugate(&projector),
                    });
                }
                _ => {
                    return Err(Error::IllConditioned(format!(
                        "eigenvalue {center:.6} has no matching conjugate"
                    )))
                }
            }
        }
        clusters[idx] = Some(Cluster { center, count, projector });
    }
    clusters
        .into_iter()
        .map(|c| c.ok_or_else(|| Error::IllConditioned("unpaired eigenvalue cluster".into())))
        .collect()
}

/// Spectral analysis of a group element: clusters, Jordan parts and the
/// nilpotency degree of the unipotent part.
pub fn analyze(g: &GroupElement, tol: f64) -> Result<Analysis> {
    let residual = membership_residual(&g.mat, g.ctx)?;
    if residual >= tol {
        return Err(Error::NotInGroup { context: g.ctx, residual });
    }
    let phi = g.mat.complex_adjoint();
    let clusters = spectral_clusters(&phi)?;

    let dim2 = phi.nrows();
    let mut a_s = CMatrix::zeros(dim2, dim2);
    for c in &clusters {
        a_s += &c.projector * c.center;
    }
    let semisimple = QMatrix::project_complex_adjoint(&a_s)?;
    let unipotent = &form_inverse(&semisimple, g.ctx) * &g.mat;
    let nilpotent = unipotent.sub(&QMatrix::identity(g.dim()));
    let degree = nilpotency_degree(&nilpotent, g.mat.frob_norm().max(1.0))?;
    if degree > 1 && !g.ctx.is_hyperbolic() {
        return Err(Error::IllConditioned(
            "compact element with a nontrivial unipotent part".into(),
        ));
    }

    Ok(Analysis {
        element: g.clone(),
        phi,
        clusters,
        semisimple,
        unipotent,
        nilpotent,
        degree,
    })
}

/// Smallest `k` with `N^k = 0`, using relative thresholds on `‖N^k‖_F / scale^k`.
fn nilpotency_degree(n: &QMatrix, scale: f64) -> Result<u32> {
    let mut power = QMatrix::identity(n.rows());
    for k in 1..=4u32 {
        power = &power * n;
        let size = power.frob_norm() / scale.powi(k as i32);
        if size < NILPOTENT_ZERO {
            if k == 4 {
                break;
            }
            return Ok(k);
        }
        if size < NILPOTENT_SURE {
            return Err(Error::IllConditioned(format!(
                "cannot decide whether (g_u - I)^{k} vanishes (relative size {size:.2e})"
            )));
        }
    }
    Err(Error::IllConditioned(
        "unipotent part is not nilpotent of degree at most 3".into(),
    ))
}

/// Orthonormal basis (columns) of the range of `p`, assumed to have rank `k`.
fn range_basis(p: &CMatrix, k: usize) -> CMatrix {
    let mut cols: Vec<DVector<Complex64>> = (0..p.ncols()).map(|c| p.column(c).into_owned()).collect();
    let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(k);
    for _ in 0..k {
        let (best, _) = cols
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.norm()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let v = cols.swap_remove(best);
        let v = &v / Complex64::new(v.norm(), 0.0);
        for c in cols.iter_mut() {
            let coeff = v.dotc(c);
            *c -= &v * coeff;
        }
        basis.push(v);
    }
    CMatrix::from_columns(&basis)
}

/// Euclidean orthonormalization over `H` with rank detection.
pub fn euclidean_orthonormalize(cands: &[QVector]) -> Vec<QVector> {
    let scale = cands.iter().map(|v| qvec::norm(v)).fold(0.0, f64::max);
    let mut pool: Vec<QVector> = cands.to_vec();
    let mut out = Vec::new();
    loop {
        pool.retain(|v| qvec::norm(v) > RANK_TOL * scale);
        let Some((best, _)) = pool
            .iter()
            .enumerate()
            .map(|(i, v)| (i, qvec::norm(v)))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        else {
            break;
        };
        let v = pool.swap_remove(best);
        let v = qvec::scale(&v, Quaternion::real(1.0 / qvec::norm(&v)));
        for w in pool.iter_mut() {
            let c = qvec::dot(&v, w);
            *w = qvec::sub_scaled(w, &v, c);
        }
        out.push(v);
    }
    out
}

/// Orthonormalization with respect to a possibly indefinite form, pivoting on
/// the largest `|⟨v,v⟩| / ‖v‖²`. Returns vectors with `⟨v,v⟩ = ±1` and their
/// signs. Coefficients stay inside the span's scalar field: all inner products
/// of vectors from one eigenset commute with the eigenvalue.
pub fn form_orthonormalize(ctx: FormContext, cands: &[QVector]) -> Result<Vec<(QVector, f64)>> {
    let scale = cands.iter().map(|v| qvec::norm(v)).fold(0.0, f64::max);
    let mut pool: Vec<QVector> = cands.to_vec();
    let mut out = Vec::new();
    loop {
        pool.retain(|v| qvec::norm(v) > RANK_TOL * scale);
        if pool.is_empty() {
            break;
        }
        let ratio = |v: &QVector| ctx.inner(v, v).re().abs() / qvec::norm(v).powi(2);
        let (best, best_ratio) = pool
            .iter()
            .enumerate()
            .map(|(i, v)| (i, ratio(v)))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        let best = if best_ratio < 1e-3 {
            // all remaining vectors are nearly null: combine the most
            // strongly paired two into a non-null vector
            let mut pick = None;
            let mut top = 0.0;
            for a in 0..pool.len() {
                for b in 0..pool.len() {
                    if a == b {
                        continue;
                    }
                    let m = ctx.inner(&pool[a], &pool[b]).norm() / (qvec::norm(&pool[a]) * qvec::norm(&pool[b]));
                    if m > top {
                        top = m;
                        pick = Some((a, b));
                    }
                }
            }
            let Some((a, b)) = pick.filter(|_| top > 1e-3) else {
                return Err(Error::IllConditioned("eigenspace is degenerate for the form".into()));
            };
            let p = ctx.inner(&pool[a], &pool[b]);
            let c = p.conj() / p.norm();
            pool[a] = qvec::add_scaled(&pool[a], &pool[b], c);
            a
        } else {
            best
        };
        let v = pool.swap_remove(best);
        let nv = ctx.inner(&v, &v).re();
        let sign = nv.signum();
        let v = qvec::scale(&v, Quaternion::real(1.0 / nv.abs().sqrt()));
        for w in pool.iter_mut() {
            let c = ctx.inner(&v, w) * sign;
            *w = qvec::sub_scaled(w, &v, c);
        }
        out.push((v, sign));
    }
    Ok(out)
}

/// Type of the form restricted to the span of `vectors`.
pub fn form_type(ctx: FormContext, vectors: &[QVector]) -> Result<GeomType> {
    if ctx == FormContext::Positive {
        return Ok(GeomType::NotApplicable);
    }
    let basis = euclidean_orthonormalize(vectors);
    let m = basis.len();
    if m == 0 {
        return Err(Error::IllConditioned("empty eigenspace".into()));
    }
    let gram = QMatrix::from_fn(m, m, |a, b| ctx.inner(&basis[a], &basis[b]));
    let herm = gram.complex_adjoint();
    let herm = (&herm + herm.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let largest = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let smallest = values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    if largest == 0.0 || smallest < NULL_RATIO * largest {
        return Ok(GeomType::Null);
    }
    if smallest < NONDEGENERATE_RATIO * largest {
        return Err(Error::IllConditioned(format!(
            "eigenspace Gram matrix is nearly singular (ratio {:.2e})",
            smallest / largest
        )));
    }
    let pos = values.iter().any(|&v| v > 0.0);
    let neg = values.iter().any(|&v| v < 0.0);
    Ok(match (pos, neg) {
        (true, false) => GeomType::Positive,
        (false, true) => GeomType::Negative,
        _ => GeomType::Indefinite,
    })
}

/// Quaternionic basis of the genuine eigenspace `{v : g v = v μ}` of a cluster.
fn eigenspace_vectors(analysis: &Analysis, cluster: &Cluster) -> Vec<QVector> {
    let basis = range_basis(&cluster.projector, cluster.count);
    let a_s = {
        let dim2 = analysis.phi.nrows();
        let mut a_s = CMatrix::zeros(dim2, dim2);
        for c in &analysis.clusters {
            a_s += &c.projector * c.center;
        }
        a_s
    };
    let nil = &analysis.phi - a_s;
    let image = &nil * &basis;
    let scale = analysis.phi.norm().max(1.0);
    let svd = image.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut vecs = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s < 1e-6 * scale {
            let z = v_t.row(i).adjoint();
            let w = &basis * z;
            vecs.push(qvec_from_complex(w.as_slice()));
        }
    }
    // singular values beyond the rank of a wide product are implicit zeros
    let k = basis.ncols();
    for i in svd.singular_values.len()..k {
        let z = v_t.row(i).adjoint();
        vecs.push(qvec_from_complex((&basis * z).as_slice()));
    }
    vecs
}

/// Similarity classes of eigenvalues with multiplicities and types.
pub fn eigen_classes(g: &GroupElement, tol: f64) -> Result<Vec<EigenClass>> {
    let analysis = analyze(g, tol)?;
    eigen_classes_of(&analysis)
}

pub fn eigen_classes_of(analysis: &Analysis) -> Result<Vec<EigenClass>> {
    let ctx = analysis.element.ctx;
    analysis
        .canonical_clusters()
        .map(|c| {
            let geom_type = if ctx == FormContext::Positive {
                GeomType::NotApplicable
            } else {
                form_type(ctx, &eigenspace_vectors(analysis, c))?
            };
            Ok(EigenClass {
                rep: c.center,
                multiplicity: c.quaternionic_dim(),
                geom_type,
            })
        })
        .collect()
}

/// `g = u d u^-1` with `d` diagonal and complex.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    /// Columns are form-orthonormal eigenvectors.
    pub basis: QMatrix,
    /// Canonical eigenvalues; in hyperbolic contexts the negative-type one
    /// comes first.
    pub diagonal: Vec<Complex64>,
    /// Context preserved by `d`: the input context, except that Siegel
    /// elements are diagonalized in the ball form (`u* Ĵ u = J`).
    pub normal_ctx: FormContext,
    /// `‖u d u^-1 - g‖_F`.
    pub residual: f64,
    /// Condition number of `φ(u)`.
    pub cond: f64,
}

impl Diagonalization {
    pub fn diagonal_matrix(&self) -> QMatrix {
        QMatrix::complex_diag(&self.diagonal)
    }

    /// `u^-1`, computed from the form identity.
    pub fn basis_inverse(&self, element_ctx: FormContext) -> QMatrix {
        intertwiner_inverse(&self.basis, self.normal_ctx, element_ctx)
    }
}

fn class_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
}

/// Diagonalizes a semisimple element with unit-modulus eigenvalues.
pub fn diagonalize(g: &GroupElement, tol: f64) -> Result<Diagonalization> {
    let analysis = analyze(g, tol)?;
    diagonalize_analysis(&analysis)
}

pub fn diagonalize_analysis(analysis: &Analysis) -> Result<Diagonalization> {
    let g = &analysis.element;
    if analysis.degree > 1 {
        return Err(Error::NotSemisimple { cond: f64::INFINITY });
    }
    if analysis.max_modulus_deviation() > UNIT_BAND {
        return Err(Error::WrongContext(
            "hyperbolic elements are not diagonalized inside the group".into(),
        ));
    }
    let ctx = g.ctx;
    let mut columns: Vec<(QVector, f64, Complex64)> = Vec::new();
    for c in analysis.canonical_clusters() {
        let vecs = form_orthonormalize(ctx, &c.candidate_vectors())?;
        if vecs.len() != c.quaternionic_dim() {
            return Err(Error::IllConditioned(format!(
                "eigenspace of {:.6} has dimension {} instead of {}",
                c.center,
                vecs.len(),
                c.quaternionic_dim()
            )));
        }
        columns.extend(vecs.into_iter().map(|(v, s)| (v, s, c.center)));
    }
    let negatives = columns.iter().filter(|c| c.1 < 0.0).count();
    let expected = usize::from(ctx.is_hyperbolic());
    if negatives != expected || columns.len() != g.dim() {
        return Err(Error::IllConditioned(format!(
            "found {negatives} negative directions among {} eigenvectors",
            columns.len()
        )));
    }
    columns.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .reverse()
            .then_with(|| class_order(&a.2, &b.2))
    });
    let basis = QMatrix::from_columns(&columns.iter().map(|c| c.0.clone()).collect::<Vec<_>>());
    let diagonal: Vec<Complex64> = columns.iter().map(|c| c.2).collect();
    let normal_ctx = if ctx == FormContext::Siegel { FormContext::Ball } else { ctx };
    let inv = intertwiner_inverse(&basis, normal_ctx, ctx);
    let recon = &(&basis * &QMatrix::complex_diag(&diagonal)) * &inv;
    let residual = recon.dist(&g.mat);
    let svd = basis.complex_adjoint().svd(false, false);
    let cond = svd.singular_values.max() / svd.singular_values.min();
    if !(cond < SEMISIMPLE_COND) {
        return Err(Error::NotSemisimple { cond });
    }
    Ok(Diagonalization {
        basis,
        diagonal,
        normal_ctx,
        residual,
        cond,
    })
}

/// Commuting semisimple and unipotent parts.
#[derive(Clone, Debug)]
pub struct JordanPair {
    pub semisimple: GroupElement,
    pub unipotent: GroupElement,
    /// Degree of the minimal polynomial of the unipotent part (1, 2 or 3).
    pub degree: u32,
    /// `‖g_s g_u - g_u g_s‖_F`.
    pub commutator_residual: f64,
    /// `‖g_s g_u - g‖_F`.
    pub product_residual: f64,
}

pub fn jordan_decompose(g: &GroupElement, tol: f64) -> Result<JordanPair> {
    let analysis = analyze(g, tol)?;
    Ok(jordan_of(&analysis))
}

pub fn jordan_of(analysis: &Analysis) -> JordanPair {
    let g = &analysis.element;
    let s = &analysis.semisimple;
    let u = &analysis.unipotent;
    JordanPair {
        semisimple: GroupElement::new_unchecked(s.clone(), g.ctx),
        unipotent: GroupElement::new_unchecked(u.clone(), g.ctx),
        degree: analysis.degree,
        commutator_residual: (s * u).dist(&(u * s)),
        product_residual: (s * u).dist(&g.mat),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn siegel(m: QMatrix) -> GroupElement {
        GroupElement::new(m, FormContext::Siegel, 1e-12).unwrap()
    }

    #[test]
    fn converter_round_trip() {
        let v = vec![Quaternion::new(1.0, 2.0, 3.0, 4.0), Quaternion::new(-0.5, 0.0, 0.25, 1.0)];
        assert_eq!(qvec_from_complex(complex_from_qvec(&v).as_slice()), v);
    }

    #[test]
    fn converted_eigenvector_is_right_eigenvector() {
        let g = QMatrix::complex_diag(&[c(0.0, 1.0), Complex64::from_polar(1.0, 0.3)]);
        let w = complex_from_qvec(&[Quaternion::J, Quaternion::ZERO]);
        // g (j) = j (-i): the complex vector of j is an eigenvector of φ(g) for -i
        let phi = g.complex_adjoint();
        let lhs = &phi * &w;
        assert!((lhs - &w * c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn scalar_i_in_sp2() {
        let g = GroupElement::new(QMatrix::scalar(2, Quaternion::I), FormContext::Positive, 1e-12).unwrap();
        let classes = eigen_classes(&g, 1e-9).unwrap();
        assert_eq!(classes.len(), 1);
        assert!((classes[0].rep - c(0.0, 1.0)).norm() < 1e-12);
        assert_eq!(classes[0].multiplicity, 2);
        assert_eq!(classes[0].geom_type, GeomType::NotApplicable);
    }

    #[test]
    fn real_hyperbolic_classes_are_null() {
        let g = siegel(QMatrix::diag(&[Quaternion::real(2.0), Quaternion::real(0.5)]));
        let classes = eigen_classes(&g, 1e-9).unwrap();
        assert_eq!(classes.len(), 2);
        assert!((classes[0].rep - c(0.5, 0.0)).norm() < 1e-12);
        assert!((classes[1].rep - c(2.0, 0.0)).norm() < 1e-12);
        for cl in &classes {
            assert_eq!(cl.multiplicity, 1);
            assert_eq!(cl.geom_type, GeomType::Null);
        }
    }

    #[test]
    fn elliptic_ball_classes() {
        // diag(ω, ω, 1) with ω = e^{iπ/3}: e0 is negative, so [ω] is indefinite
        let w = Complex64::from_polar(1.0, PI / 3.0);
        let g = GroupElement::new(QMatrix::complex_diag(&[w, w, c(1.0, 0.0)]), FormContext::Ball, 1e-12).unwrap();
        let classes = eigen_classes(&g, 1e-9).unwrap();
        assert_eq!(classes.len(), 2);
        let omega = classes.iter().find(|k| (k.rep - w).norm() < 1e-9).unwrap();
        assert_eq!(omega.multiplicity, 2);
        assert_eq!(omega.geom_type, GeomType::Indefinite);
        let one = classes.iter().find(|k| (k.rep - c(1.0, 0.0)).norm() < 1e-9).unwrap();
        assert_eq!(one.multiplicity, 1);
        assert_eq!(one.geom_type, GeomType::Positive);

        let g = GroupElement::new(QMatrix::complex_diag(&[w, c(1.0, 0.0), c(1.0, 0.0)]), FormContext::Ball, 1e-12).unwrap();
        let classes = eigen_classes(&g, 1e-9).unwrap();
        let omega = classes.iter().find(|k| (k.rep - w).norm() < 1e-9).unwrap();
        assert_eq!(omega.geom_type, GeomType::Negative);
    }

    #[test]
    fn vertical_translation_jordan() {
        let mut uv = QMatrix::identity(2);
        uv[(1, 0)] = Quaternion::I;
        let g = siegel(uv.clone());
        let pair = jordan_decompose(&g, 1e-9).unwrap();
        assert_eq!(pair.degree, 2);
        assert!(pair.semisimple.mat.dist(&QMatrix::identity(2)) < 1e-10);
        assert!(pair.unipotent.mat.dist(&uv) < 1e-10);
        let classes = eigen_classes(&g, 1e-9).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].multiplicity, 2);
        assert_eq!(classes[0].geom_type, GeomType::Null);
    }

    #[test]
    fn non_vertical_times_scalar_jordan() {
        // λ u_NV with a = 1, s = 1/2
        let lam = Complex64::from_polar(1.0, PI / 4.0);
        let l = Quaternion::from_complex(lam);
        let mut u = QMatrix::identity(3);
        u[(1, 0)] = Quaternion::real(0.5);
        u[(1, 2)] = Quaternion::ONE;
        u[(2, 0)] = Quaternion::ONE;
        // (u - I)^3 = 0 by direct multiplication
        let nil = u.sub(&QMatrix::identity(3));
        assert!(nil.pow(3).frob_norm() == 0.0);
        assert!(nil.pow(2).frob_norm() > 0.5);
        let g = siegel(&QMatrix::scalar(3, l) * &u);
        let pair = jordan_decompose(&g, 1e-9).unwrap();
        assert_eq!(pair.degree, 3);
        assert!(pair.semisimple.mat.dist(&QMatrix::scalar(3, l)) < 1e-9);
        assert!(pair.unipotent.mat.dist(&u) < 1e-9);
        assert!(pair.commutator_residual < 1e-9);
    }

    #[test]
    fn semisimple_jordan_is_trivial() {
        let g = GroupElement::new(QMatrix::complex_diag(&[c(0.0, 1.0), c(-1.0, 0.0)]), FormContext::Ball, 1e-12).unwrap();
        let pair = jordan_decompose(&g, 1e-9).unwrap();
        assert_eq!(pair.degree, 1);
        assert!(pair.unipotent.mat.dist(&QMatrix::identity(2)) < 1e-10);
        assert!(pair.semisimple.mat.dist(&g.mat) < 1e-10);
    }

    #[test]
    fn diagonal_input_keeps_basis() {
        let d = [Complex64::from_polar(1.0, 0.4), c(0.0, 1.0), c(-1.0, 0.0)];
        let g = GroupElement::new(QMatrix::complex_diag(&d), FormContext::Positive, 1e-12).unwrap();
        let diag = diagonalize(&g, 1e-9).unwrap();
        assert!(diag.residual < 1e-12);
        // sorted by (Re, Im)
        assert!((diag.diagonal[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((diag.diagonal[1] - c(0.0, 1.0)).norm() < 1e-12);
        for k in 0..3 {
            let col = diag.basis.column(k);
            assert!((qvec::norm(&col) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugated_i_diagonalizes_to_i() {
        let x = Quaternion::new(0.3, -0.2, 0.9, 0.1).normalize();
        let g = QMatrix::scalar(1, x * Quaternion::I * x.inv());
        let g = GroupElement::new(g, FormContext::Positive, 1e-12).unwrap();
        let diag = diagonalize(&g, 1e-9).unwrap();
        assert!((diag.diagonal[0] - c(0.0, 1.0)).norm() < 1e-12);
        assert!(diag.residual < 1e-12);
    }

    #[test]
    fn parabolic_is_not_diagonalized() {
        let mut uv = QMatrix::identity(2);
        uv[(1, 0)] = Quaternion::I;
        assert!(matches!(diagonalize(&siegel(uv), 1e-9), Err(Error::NotSemisimple { .. })));
    }

    #[test]
    fn non_member_is_rejected() {
        let g = GroupElement::new_unchecked(QMatrix::scalar(2, Quaternion::real(2.0)), FormContext::Positive);
        assert!(matches!(analyze(&g, 1e-9), Err(Error::NotInGroup { .. })));
    }

    #[test]
    fn nearly_merged_classes_are_ill_conditioned() {
        let d = [Complex64::from_polar(1.0, 1.0), Complex64::from_polar(1.0, 1.0 + 2e-4)];
        let g = GroupElement::new(QMatrix::complex_diag(&d), FormContext::Positive, 1e-12).unwrap();
        assert!(matches!(analyze(&g, 1e-9), Err(Error::IllConditioned(_))));
    }
}
