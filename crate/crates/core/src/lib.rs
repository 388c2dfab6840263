//! Non-Hermitian chain Hamiltonians with nonreciprocal hopping.
//!
//! The crate is layered bottom-up:
//!
//! - [`numkernel`]: dense complex linear algebra (Schur/eigen, SVD, LU, `expm`).
//! - [`model`]: Hamiltonian families and structural predicates.
//! - [`spectral`]: paired right/left eigenvectors and growth rates.
//! - [`dynamics`]: propagation under `H` and `H†` plus derived observables.

pub mod dynamics;
pub mod model;
pub mod numkernel;
pub mod spectral;

pub use num_complex::Complex64;

pub use dynamics::{
    fit_exponential_rate, fit_power_exponent, observables, peak_transient, propagate,
    propagate_adjoint, propagate_biorthogonal, DynamicsError, Method, ObservableSeries,
    StateTrajectory,
};
pub use model::{
    build, check_pseudo_hermitian, gauge_transform, is_hermitian, is_normal, Family,
    HamiltonianSpec, ModelError,
};
pub use numkernel::{ComplexVector, DenseComplexMatrix, LinalgError};
pub use spectral::{analyze, max_growth_rate, spectrum_is_real, SpectralData, SpectralError};
