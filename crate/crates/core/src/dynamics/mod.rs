//! Time evolution of `ψ` under `H` and `φ` under `H†`, and the observables
//! built from them.
//!
//! Both equations are `d/dt state = -i·op·state` (`ħ = 1`), with `op = H` for
//! the right state and `op = H†` for the left state. For paired evolution the
//! biorthogonal product `Σ_j y_j* x_j` is a constant of motion.

mod fit;
mod observables;
mod propagate;

pub use fit::{fit_exponential_rate, fit_power_exponent, peak_transient, MIN_FIT_SAMPLES};
pub use observables::{observables, ObservableSeries, ZERO_OVERLAP_SENTINEL};
pub use propagate::{
    localized_state, propagate, propagate_adjoint, propagate_biorthogonal, uniform_grid, Method,
    StateTrajectory, DEFAULT_DT, DEFAULT_RK4_SUBSTEP, OVERFLOW_LIMIT, REFRESH_INTERVAL,
};

use thiserror::Error;

use crate::numkernel::LinalgError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("expm-step needs a uniform time grid (step {step} differs from {expected} at sample {index})")]
    NonUniformGrid { index: usize, step: f64, expected: f64 },
    #[error("state has dimension {state} but operator has dimension {operator}")]
    DimensionMismatch { state: usize, operator: usize },
    #[error("overflow: state amplitude exceeded {limit:e}; last valid time t = {last_valid_time}")]
    Overflow { last_valid_time: f64, limit: f64 },
    #[error("fit window [{lo}, {hi}] holds {found} samples, need at least {required}")]
    InsufficientSamples { lo: f64, hi: f64, found: usize, required: usize },
    #[error("non-positive value {value} at t = {t} inside fit window")]
    NonPositiveValue { t: f64, value: f64 },
    #[error("power-law fit window must start at t > 0, got {0}")]
    NonPositiveWindowStart(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
