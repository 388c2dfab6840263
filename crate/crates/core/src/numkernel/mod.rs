//! Dense complex linear algebra for small operators (up to a few hundred rows).
//!
//! Everything here is value-semantic: inputs are borrowed, outputs are freshly
//! allocated, and no routine keeps state between calls.

mod eig;
mod expm;
mod matrix;
mod solve;
mod svd;

pub use eig::{clusters as eig_clusters, eig, schur, Eigen, DEFAULT_DEGENERACY_TOL};
pub use expm::expm;
pub use matrix::{multiply, ComplexVector, DenseComplexMatrix};
pub use solve::{inverse, solve};
pub use svd::{null_space, singular_values, svd_jacobi, Svd};

use thiserror::Error;

/// Default absolute tolerance for entrywise matrix comparisons.
pub const DEFAULT_COMPARE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is numerically singular at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("matrix exponential overflowed")]
    Overflow,
}
