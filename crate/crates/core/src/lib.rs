//! Reversibility of quaternionic hyperbolic isometries.
//!
//! The crate works with matrices over the real quaternions that preserve one
//! of three Hermitian forms: the positive-definite form on `H^n` (the compact
//! group `Sp(n)`), the signature `(n,1)` form `J = diag(-1, 1, ..., 1)`
//! (`Sp(n,1)`, ball model) and its Cayley-transformed Siegel form `Ĵ`.
//!
//! Starting from such a matrix it can
//!
//! * compute similarity classes of right eigenvalues and their types,
//! * split an element into commuting semisimple and unipotent parts,
//! * classify an element as elliptic, hyperbolic or one of the parabolic kinds
//!   and produce a certified conjugator to a normal form,
//! * build a reverser `h` with `h g h^-1 = g^-1`,
//! * decide strong reversibility and produce an involution witness,
//! * factor elements of `Sp(2m)` into four involutions,
//! * produce a reverser squaring to `±I`, so every element of `PSp(n,1)` is a
//!   product of two involutions.
//!
//! Every construction is returned together with residuals, and
//! [`reversibility::verify_report`] recomputes all of them from scratch.
//!
//! ```
//! use qhi::{classify, generate, reversibility, Kind};
//!
//! let recipe = generate::ElementRecipe::new(Kind::Hyperbolic, 2, 11);
//! let sample = generate::random_element(&recipe).unwrap();
//! let class = classify::classify(&sample.element, qhi::DEFAULT_TOL).unwrap();
//! assert_eq!(class.kind, Kind::Hyperbolic);
//!
//! let h = reversibility::reverser_spn1(&sample.element, qhi::DEFAULT_TOL).unwrap();
//! assert!(reversibility::reversal_residual(&sample.element.mat, &h.mat) < 1e-8);
//! ```

pub mod classify;
pub mod generate;
pub mod io;
pub mod qmat;
pub mod quat;
pub mod reversibility;
pub mod spectral;

pub use classify::{IsometryClass, Kind};
pub use qmat::{FormContext, GroupElement, QMatrix};
pub use quat::{Quaternion, SimilarityClass};
pub use reversibility::ReversibilityReport;

/// Default absolute tolerance for matrix identities.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance for scalar quaternion identities.
pub const TIGHT_TOL: f64 = 1e-12;

/// Environment variable overriding [`DEFAULT_TOL`] for the command line tool.
pub const TOL_ENV: &str = "QHI_TOL";

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input is zero")]
    ZeroInput,
    #[error("quaternion is not purely imaginary (real part {re:e})")]
    NotImaginary { re: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("complex matrix is not in the image of the adjoint embedding (residual {residual:e})")]
    NotInImage { residual: f64 },
    #[error("element is not in {context} (residual {residual:e})")]
    NotInGroup { context: FormContext, residual: f64 },
    #[error("ill-conditioned input: {0}")]
    IllConditioned(String),
    #[error("element is not semisimple (eigenvector condition number {cond:e})")]
    NotSemisimple { cond: f64 },
    #[error(
        "four-involution factorization needs even n, got n = {n}; odd n needs an Sp(3) \
         five-involution factorization that is not constructed here"
    )]
    OddDimension { n: usize },
    #[error("bad recipe: {0}")]
    BadRecipe(String),
    #[error("operation does not apply: {0}")]
    WrongContext(String),
    #[error("malformed document: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
