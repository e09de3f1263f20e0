//! Dense quaternionic matrices, the three Hermitian forms, group membership,
//! the complex adjoint embedding and the Cayley transform.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quat::Quaternion;
use crate::{Error, Result};

/// Column vector over the quaternions.
pub type QVector = Vec<Quaternion>;

/// Complex matrix type used for the adjoint embedding.
pub type CMatrix = DMatrix<Complex64>;

/// Row-major dense matrix over the quaternions.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("matrix must be non-empty".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(QMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Quaternion::ONE)
    }

    /// `q I_n`.
    pub fn scalar(n: usize, q: Quaternion) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = q;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn diag(entries: &[Quaternion]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (k, &q) in entries.iter().enumerate() {
            m[(k, k)] = q;
        }
        m
    }

    pub fn complex_diag(entries: &[Complex64]) -> Self {
        let q: Vec<Quaternion> = entries.iter().map(|&c| Quaternion::from_complex(c)).collect();
        Self::diag(&q)
    }

    pub fn from_rows(rows: &[Vec<Quaternion>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        QMatrix::new(r, c, rows.concat())
    }

    /// Square matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[QVector]) -> Self {
        let n = cols[0].len();
        QMatrix::from_fn(n, cols.len(), |r, c| cols[c][r])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Quaternion] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> QVector {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Quaternion>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Conjugate transpose.
    pub fn star(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Quaternion::ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs[(k, c)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Quaternion]) -> QVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Quaternion::ZERO, |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, rhs: &QMatrix) -> QMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &QMatrix) -> QMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &QMatrix, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&q| f(q)).collect(),
        }
    }

    /// Frobenius norm over all `4 rows cols` real coordinates.
    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self - rhs‖_F`.
    pub fn dist(&self, rhs: &QMatrix) -> f64 {
        self.sub(rhs).frob_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|q| q.is_finite())
    }

    /// Block-diagonal sum `self ⊕ rhs`.
    pub fn direct_sum(&self, rhs: &QMatrix) -> QMatrix {
        let mut out = QMatrix::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)];
            }
        }
        for r in 0..rhs.rows {
            for c in 0..rhs.cols {
                out[(self.rows + r, self.cols + c)] = rhs[(r, c)];
            }
        }
        out
    }

    /// Top-left `k x k` block.
    pub fn leading_block(&self, k: usize) -> QMatrix {
        QMatrix::from_fn(k, k, |r, c| self[(r, c)])
    }

    /// `self^k` for square matrices.
    pub fn pow(&self, k: u32) -> QMatrix {
        let mut out = QMatrix::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// The complex adjoint `φ(A + Bj) = ((A, B), (-B̄, Ā))`.
    pub fn complex_adjoint(&self) -> CMatrix {
        let (r, c) = (self.rows, self.cols);
        let mut m = CMatrix::zeros(2 * r, 2 * c);
        for i in 0..r {
            for k in 0..c {
                let q = self[(i, k)];
                let a = q.complex_part();
                let b = q.j_part();
                m[(i, k)] = a;
                m[(i, c + k)] = b;
                m[(r + i, k)] = -b.conj();
                m[(r + i, c + k)] = a.conj();
            }
        }
        m
    }

    /// Left inverse of [`complex_adjoint`](Self::complex_adjoint) on its image.
    /// Fails with `NotInImage` when `β m̄ β^-1` differs from `m` by more than `tol`.
    pub fn from_complex_adjoint(m: &CMatrix, tol: f64) -> Result<QMatrix> {
        let p = Self::project_complex_adjoint(m)?;
        let residual = (&p.complex_adjoint() - m).norm();
        if residual > tol {
            return Err(Error::NotInImage { residual });
        }
        Ok(p)
    }

    /// Nearest preimage under `φ`: averages `m` with `β m̄ β^-1`.
    pub fn project_complex_adjoint(m: &CMatrix) -> Result<QMatrix> {
        if m.nrows() % 2 != 0 || m.ncols() % 2 != 0 || m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "complex adjoint must have even shape, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let (r, c) = (m.nrows() / 2, m.ncols() / 2);
        Ok(QMatrix::from_fn(r, c, |i, k| {
            let a = (m[(i, k)] + m[(r + i, c + k)].conj()) * 0.5;
            let b = (m[(i, c + k)] - m[(r + i, k)].conj()) * 0.5;
            Quaternion::from_parts(a, b)
        }))
    }

    /// General inverse through the complex adjoint.
    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let phi = self.complex_adjoint();
        let svd = phi.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if !(smin > 1e-13 * smax) {
            return Err(Error::SingularMatrix);
        }
        let inv = phi.try_inverse().ok_or(Error::SingularMatrix)?;
        QMatrix::project_complex_adjoint(&inv)
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (r, c): (usize, usize)) -> &Quaternion {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Mul for QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: QMatrix) -> QMatrix {
        &self * &rhs
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|q| format!("({q:.4})")).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Which Hermitian form a matrix is meant to preserve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormContext {
    /// Identity form on `H^n`; the group is `Sp(n)`.
    #[serde(rename = "sp_n")]
    Positive,
    /// `J = diag(-1, 1, ..., 1)` on `H^{n+1}`; the group is `Sp(n,1)`.
    #[serde(rename = "sp_n1")]
    Ball,
    /// `Ĵ` with the block `((0,-1),(-1,0))` leading; the group is `Ŝp(n,1)`.
    #[serde(rename = "sp_n1_hat")]
    Siegel,
}

impl fmt::Display for FormContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormContext::Positive => "Sp(n)",
            FormContext::Ball => "Sp(n,1)",
            FormContext::Siegel => "Ŝp(n,1)",
        })
    }
}

impl FormContext {
    pub fn is_hyperbolic(self) -> bool {
        self != FormContext::Positive
    }

    /// Smallest matrix size the context makes sense for.
    pub fn min_dim(self) -> usize {
        if self.is_hyperbolic() {
            2
        } else {
            1
        }
    }

    /// The form matrix of size `dim`.
    pub fn form(self, dim: usize) -> QMatrix {
        let mut f = QMatrix::identity(dim);
        match self {
            FormContext::Positive => {}
            FormContext::Ball => f[(0, 0)] = Quaternion::real(-1.0),
            FormContext::Siegel => {
                f[(0, 0)] = Quaternion::ZERO;
                f[(1, 1)] = Quaternion::ZERO;
                f[(0, 1)] = Quaternion::real(-1.0);
                f[(1, 0)] = Quaternion::real(-1.0);
            }
        }
        f
    }

    /// `F v` without building `F`.
    pub fn apply(self, v: &[Quaternion]) -> QVector {
        let mut out = v.to_vec();
        match self {
            FormContext::Positive => {}
            FormContext::Ball => out[0] = -v[0],
            FormContext::Siegel => {
                out[0] = -v[1];
                out[1] = -v[0];
            }
        }
        out
    }

    /// `⟨v, w⟩ = v* F w`.
    pub fn inner(self, v: &[Quaternion], w: &[Quaternion]) -> Quaternion {
        let fw = self.apply(w);
        v.iter()
            .zip(&fw)
            .fold(Quaternion::ZERO, |acc, (&a, &b)| acc + a.conj() * b)
    }

    /// `F M` for a matrix with `dim` rows.
    pub fn apply_left(self, m: &QMatrix) -> QMatrix {
        let mut out = m.clone();
        match self {
            FormContext::Positive => {}
            FormContext::Ball => {
                for c in 0..m.cols() {
                    out[(0, c)] = -m[(0, c)];
                }
            }
            FormContext::Siegel => {
                for c in 0..m.cols() {
                    out[(0, c)] = -m[(1, c)];
                    out[(1, c)] = -m[(0, c)];
                }
            }
        }
        out
    }

    /// `M F` for a matrix with `dim` columns.
    pub fn apply_right(self, m: &QMatrix) -> QMatrix {
        let mut out = m.clone();
        match self {
            FormContext::Positive => {}
            FormContext::Ball => {
                for r in 0..m.rows() {
                    out[(r, 0)] = -m[(r, 0)];
                }
            }
            FormContext::Siegel => {
                for r in 0..m.rows() {
                    out[(r, 0)] = -m[(r, 1)];
                    out[(r, 1)] = -m[(r, 0)];
                }
            }
        }
        out
    }

    pub fn json_name(self) -> &'static str {
        match self {
            FormContext::Positive => "sp_n",
            FormContext::Ball => "sp_n1",
            FormContext::Siegel => "sp_n1_hat",
        }
    }

    /// Matrix size for the `n` used in JSON documents.
    pub fn dim_for(self, n: usize) -> usize {
        if self.is_hyperbolic() {
            n + 1
        } else {
            n
        }
    }

    /// Inverse of [`dim_for`](Self::dim_for).
    pub fn n_for(self, dim: usize) -> usize {
        if self.is_hyperbolic() {
            dim - 1
        } else {
            dim
        }
    }
}

/// `‖g* F g - F‖_F`.
pub fn membership_residual(g: &QMatrix, ctx: FormContext) -> Result<f64> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch("group elements are square".into()));
    }
    if g.rows() < ctx.min_dim() {
        return Err(Error::DimensionMismatch(format!(
            "{ctx} needs size at least {}, got {}",
            ctx.min_dim(),
            g.rows()
        )));
    }
    let lhs = &g.star() * &ctx.apply_left(g);
    Ok(lhs.dist(&ctx.form(g.rows())))
}

/// Membership test `‖g* F g - F‖_F < tol`, returning the residual either way.
pub fn is_in_group(g: &QMatrix, ctx: FormContext, tol: f64) -> Result<(bool, f64)> {
    let r = membership_residual(g, ctx)?;
    Ok((r < tol, r))
}

/// A square matrix together with the form it preserves.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub mat: QMatrix,
    pub ctx: FormContext,
}

impl GroupElement {
    /// Wraps `mat` after checking membership at `tol`.
    pub fn new(mat: QMatrix, ctx: FormContext, tol: f64) -> Result<Self> {
        let (ok, residual) = is_in_group(&mat, ctx, tol)?;
        if !ok {
            return Err(Error::NotInGroup { context: ctx, residual });
        }
        Ok(GroupElement { mat, ctx })
    }

    /// Wraps without checking.
    pub fn new_unchecked(mat: QMatrix, ctx: FormContext) -> Self {
        GroupElement { mat, ctx }
    }

    pub fn identity(dim: usize, ctx: FormContext) -> Self {
        GroupElement::new_unchecked(QMatrix::identity(dim), ctx)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// `n` in `Sp(n)` or `Sp(n,1)`.
    pub fn n(&self) -> usize {
        self.ctx.n_for(self.dim())
    }

    pub fn residual(&self) -> f64 {
        membership_residual(&self.mat, self.ctx).unwrap_or(f64::INFINITY)
    }

    /// `F^-1 g* F`, exact for members.
    pub fn inverse(&self) -> GroupElement {
        GroupElement::new_unchecked(form_inverse(&self.mat, self.ctx), self.ctx)
    }

    pub fn compose(&self, rhs: &GroupElement) -> GroupElement {
        GroupElement::new_unchecked(&self.mat * &rhs.mat, self.ctx)
    }
}

/// `F^-1 g* F`; all three forms are their own inverse.
pub fn form_inverse(g: &QMatrix, ctx: FormContext) -> QMatrix {
    ctx.apply_right(&ctx.apply_left(&g.star()))
}

/// Inverse of a matrix `k` intertwining two forms, `k* F_to k = F_from`:
/// returns `F_from^-1 k* F_to`.
pub fn intertwiner_inverse(k: &QMatrix, from: FormContext, to: FormContext) -> QMatrix {
    from.apply_left(&to.apply_right(&k.star()))
}

/// The Cayley basis change `P` of size `dim` and `C = P^-1`, with `ᵗP J P = Ĵ`.
pub fn cayley(dim: usize) -> Result<(QMatrix, QMatrix)> {
    if dim < 2 {
        return Err(Error::DimensionMismatch("Cayley transform needs size >= 2".into()));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut p = QMatrix::identity(dim);
    p[(0, 0)] = Quaternion::real(h);
    p[(0, 1)] = Quaternion::real(h);
    p[(1, 0)] = Quaternion::real(-h);
    p[(1, 1)] = Quaternion::real(h);
    let c = p.star();
    Ok((p, c))
}

/// Maps `g ∈ Ŝp(n,1)` to `P g P^-1 ∈ Sp(n,1)`.
pub fn siegel_to_ball(g: &QMatrix) -> Result<QMatrix> {
    let (p, c) = cayley(g.rows())?;
    Ok(&(&p * g) * &c)
}

/// Maps `g ∈ Sp(n,1)` to `P^-1 g P ∈ Ŝp(n,1)`.
pub fn ball_to_siegel(g: &QMatrix) -> Result<QMatrix> {
    let (p, c) = cayley(g.rows())?;
    Ok(&(&c * g) * &p)
}

/// Vector helpers over the quaternions; scalars act on the right.
pub mod qvec {
    use super::QVector;
    use crate::quat::Quaternion;

    pub fn norm(v: &[Quaternion]) -> f64 {
        v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `v c`.
    pub fn scale(v: &[Quaternion], c: Quaternion) -> QVector {
        v.iter().map(|&q| q * c).collect()
    }

    /// `v - w c`.
    pub fn sub_scaled(v: &[Quaternion], w: &[Quaternion], c: Quaternion) -> QVector {
        v.iter().zip(w).map(|(&a, &b)| a - b * c).collect()
    }

    /// `v + w c`.
    pub fn add_scaled(v: &[Quaternion], w: &[Quaternion], c: Quaternion) -> QVector {
        v.iter().zip(w).map(|(&a, &b)| a + b * c).collect()
    }

    /// Euclidean inner product `v* w`.
    pub fn dot(v: &[Quaternion], w: &[Quaternion]) -> Quaternion {
        v.iter()
            .zip(w)
            .fold(Quaternion::ZERO, |acc, (&a, &b)| acc + a.conj() * b)
    }

    pub fn unit(n: usize, k: usize) -> QVector {
        let mut v = vec![Quaternion::ZERO; n];
        v[k] = Quaternion::ONE;
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cdiag(entries: &[Complex64]) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(entries.to_vec()))
    }

    #[test]
    fn identity_is_neutral() {
        let g = QMatrix::from_fn(2, 2, |r, c| Quaternion::new(r as f64, c as f64, 1.0, -0.5));
        assert_eq!(&QMatrix::identity(2) * &g, g);
    }

    #[test]
    fn entrywise_diagonal_product() {
        let a = QMatrix::scalar(2, Quaternion::J);
        let b = QMatrix::scalar(2, Quaternion::I);
        assert_eq!(&a * &b, QMatrix::scalar(2, -Quaternion::IJ));
    }

    #[test]
    fn dimension_errors() {
        let a = QMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch(_))));
        assert!(QMatrix::new(2, 2, vec![Quaternion::ONE; 3]).is_err());
        assert!(matches!(is_in_group(&a, FormContext::Positive, 1e-9), Err(Error::DimensionMismatch(_))));
        assert!(matches!(
            is_in_group(&QMatrix::identity(1), FormContext::Ball, 1e-9),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn phi_of_scalar_j_is_beta() {
        let phi = QMatrix::scalar(2, Quaternion::J).complex_adjoint();
        let one = Complex64::new(1.0, 0.0);
        for r in 0..4 {
            for c in 0..4 {
                let expect = match (r, c) {
                    (0, 2) | (1, 3) => one,
                    (2, 0) | (3, 1) => -one,
                    _ => Complex64::new(0.0, 0.0),
                };
                assert_eq!(phi[(r, c)], expect);
            }
        }
        assert_eq!(QMatrix::from_complex_adjoint(&phi, 1e-12).unwrap(), QMatrix::scalar(2, Quaternion::J));
    }

    #[test]
    fn phi_of_diag_i() {
        let i = Complex64::new(0.0, 1.0);
        let phi = QMatrix::scalar(1, Quaternion::I).complex_adjoint();
        assert_eq!(phi, cdiag(&[i, -i]));
    }

    #[test]
    fn identity_round_trips_through_phi() {
        let id = CMatrix::identity(6, 6);
        assert_eq!(QMatrix::from_complex_adjoint(&id, 1e-12).unwrap(), QMatrix::identity(3));
    }

    #[test]
    fn non_image_is_rejected() {
        let i = Complex64::new(0.0, 1.0);
        let m = cdiag(&[i, i]);
        assert!(matches!(QMatrix::from_complex_adjoint(&m, 1e-9), Err(Error::NotInImage { .. })));
    }

    #[test]
    fn cayley_intertwines_forms() {
        for dim in 2..6 {
            let (p, c) = cayley(dim).unwrap();
            let lhs = &p.star() * &(&FormContext::Ball.form(dim) * &p);
            assert!(lhs.dist(&FormContext::Siegel.form(dim)) < 1e-15);
            assert!((&c * &p).dist(&QMatrix::identity(dim)) < 1e-15);
        }
        assert!(cayley(1).is_err());
    }

    #[test]
    fn membership_examples() {
        let jj = QMatrix::scalar(3, Quaternion::J);
        assert!(is_in_group(&jj, FormContext::Positive, 1e-12).unwrap().0);

        let mut uv = QMatrix::identity(2);
        uv[(1, 0)] = Quaternion::I;
        assert!(is_in_group(&uv, FormContext::Siegel, 1e-12).unwrap().0);

        let hyp = QMatrix::diag(&[Quaternion::real(2.0), Quaternion::real(0.5)]);
        assert!(is_in_group(&hyp, FormContext::Siegel, 1e-12).unwrap().0);
        let (ok, res) = is_in_group(&hyp, FormContext::Ball, 1e-12).unwrap();
        assert!(!ok);
        assert!(res > 1.0);
    }

    #[test]
    fn cayley_maps_siegel_hyperbolic_into_ball_group() {
        let hyp = QMatrix::diag(&[Quaternion::real(2.0), Quaternion::real(0.5)]);
        let ball = siegel_to_ball(&hyp).unwrap();
        assert!(membership_residual(&ball, FormContext::Ball).unwrap() < 1e-12);
        assert!(ball_to_siegel(&ball).unwrap().dist(&hyp) < 1e-14);
    }

    #[test]
    fn form_inverse_matches_general_inverse() {
        let hyp = QMatrix::diag(&[Quaternion::new(1.0, 1.0, 0.0, 0.0), Quaternion::new(0.5, 0.5, 0.0, 0.0)]);
        let fi = form_inverse(&hyp, FormContext::Siegel);
        assert!(fi.dist(&hyp.inverse().unwrap()) < 1e-12);
    }

    #[test]
    fn singular_inverse_fails() {
        let m = QMatrix::from_fn(2, 2, |_, _| Quaternion::ONE);
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix)));
    }
}
