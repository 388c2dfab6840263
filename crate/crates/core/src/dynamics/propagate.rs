use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::DynamicsError;
use crate::model::HamiltonianSpec;
use crate::numkernel::{expm, ComplexVector, DenseComplexMatrix, LinalgError};

/// Default sampling step.
pub const DEFAULT_DT: f64 = 0.01;

/// Default fixed substep of the RK4 integrator.
pub const DEFAULT_RK4_SUBSTEP: f64 = 1e-3;

/// Propagation aborts once any `|x_j|` exceeds this.
pub const OVERFLOW_LIMIT: f64 = 1e150;

/// `expm-step` re-anchors on a directly computed `exp(-i·op·t)·state0` this often.
pub const REFRESH_INTERVAL: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// One propagator `exp(-i·op·dt)` applied repeatedly on a uniform grid.
    ExpmStep,
    /// `exp(-i·op·t)` recomputed at every sample.
    ExpmDirect,
    /// Classical fourth-order Runge-Kutta with a fixed substep.
    Rk4 { substep: f64 },
}

impl Default for Method {
    fn default() -> Self {
        Method::ExpmStep
    }
}

impl Method {
    pub fn rk4() -> Self {
        Method::Rk4 { substep: DEFAULT_RK4_SUBSTEP }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::ExpmStep => "expm-step",
            Method::ExpmDirect => "expm-direct",
            Method::Rk4 { .. } => "rk4",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "expm-step" => Ok(Method::ExpmStep),
            "expm-direct" => Ok(Method::ExpmDirect),
            "rk4" => Ok(Method::rk4()),
            other => Err(format!("unknown propagation method `{other}`")),
        }
    }
}

/// Sampled trajectory of `ψ(t)` and, for paired runs, `φ(t)` on the same grid.
#[derive(Clone, Debug)]
pub struct StateTrajectory {
    pub times: Vec<f64>,
    pub psi: Vec<ComplexVector>,
    pub phi: Option<Vec<ComplexVector>>,
    pub spec: Option<HamiltonianSpec>,
}

impl StateTrajectory {
    pub fn with_spec(mut self, spec: HamiltonianSpec) -> Self {
        self.spec = Some(spec);
        self
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `0, dt, 2dt, …` up to and including `t_max` (within rounding).
pub fn uniform_grid(t_max: f64, dt: f64) -> Result<Vec<f64>, DynamicsError> {
    if !(dt > 0.0 && dt.is_finite() && t_max.is_finite()) || t_max < 0.0 {
        return Err(DynamicsError::InvalidGrid(format!("t_max = {t_max}, dt = {dt}")));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

/// Unit vector on a one-based `site`.
pub fn localized_state(n: usize, site: usize) -> Option<ComplexVector> {
    (1..=n).contains(&site).then(|| ComplexVector::basis(n, site - 1))
}

/// `ψ(t_k) = exp(-i·h·t_k)·ψ0`.
pub fn propagate(
    h: &DenseComplexMatrix,
    psi0: &ComplexVector,
    times: &[f64],
    method: Method,
) -> Result<StateTrajectory, DynamicsError> {
    let psi = evolve(h, psi0, times, method)?;
    Ok(StateTrajectory { times: times.to_vec(), psi, phi: None, spec: None })
}

/// `φ(t_k) = exp(-i·h†·t_k)·φ0`.
pub fn propagate_adjoint(
    h: &DenseComplexMatrix,
    phi0: &ComplexVector,
    times: &[f64],
    method: Method,
) -> Result<Vec<ComplexVector>, DynamicsError> {
    evolve(&h.adjoint(), phi0, times, method)
}

/// Paired evolution of `ψ` under `h` and `φ` under `h†` on one grid.
pub fn propagate_biorthogonal(
    h: &DenseComplexMatrix,
    psi0: &ComplexVector,
    phi0: &ComplexVector,
    times: &[f64],
    method: Method,
) -> Result<StateTrajectory, DynamicsError> {
    let psi = evolve(h, psi0, times, method)?;
    let phi = propagate_adjoint(h, phi0, times, method)?;
    Ok(StateTrajectory { times: times.to_vec(), psi, phi: Some(phi), spec: None })
}

fn validate_grid(times: &[f64]) -> Result<(), DynamicsError> {
    match times.first() {
        None => return Err(DynamicsError::InvalidGrid("empty".into())),
        Some(&t0) if t0 != 0.0 => {
            return Err(DynamicsError::InvalidGrid(format!("must start at 0, starts at {t0}")))
        }
        _ => {}
    }
    for (k, w) in times.windows(2).enumerate() {
        if !(w[1] > w[0]) || !w[1].is_finite() {
            return Err(DynamicsError::InvalidGrid(format!(
                "not strictly increasing at sample {}",
                k + 1
            )));
        }
    }
    Ok(())
}

fn check_amplitude(
    state: &ComplexVector,
    last_valid_time: f64,
) -> Result<(), DynamicsError> {
    let peak = state.max_abs();
    if !state.is_finite() || peak > OVERFLOW_LIMIT {
        return Err(DynamicsError::Overflow { last_valid_time, limit: OVERFLOW_LIMIT });
    }
    Ok(())
}

fn propagator(op: &DenseComplexMatrix, t: f64, last_valid_time: f64) -> Result<DenseComplexMatrix, DynamicsError> {
    match expm(&op.scale(Complex64::new(0.0, -t))) {
        Err(LinalgError::Overflow) => {
            Err(DynamicsError::Overflow { last_valid_time, limit: OVERFLOW_LIMIT })
        }
        other => Ok(other?),
    }
}

fn evolve(
    op: &DenseComplexMatrix,
    state0: &ComplexVector,
    times: &[f64],
    method: Method,
) -> Result<Vec<ComplexVector>, DynamicsError> {
    if state0.len() != op.dim() {
        return Err(DynamicsError::DimensionMismatch { state: state0.len(), operator: op.dim() });
    }
    validate_grid(times)?;
    let mut out = Vec::with_capacity(times.len());
    out.push(state0.clone());

    match method {
        Method::ExpmDirect => {
            for k in 1..times.len() {
                let u = propagator(op, times[k], times[k - 1])?;
                let s = u.matvec(state0)?;
                check_amplitude(&s, times[k - 1])?;
                out.push(s);
            }
        }
        Method::ExpmStep => {
            if times.len() == 1 {
                return Ok(out);
            }
            let dt = times[1] - times[0];
            for k in 2..times.len() {
                let step = times[k] - times[k - 1];
                if (step - dt).abs() > 1e-9 * dt + 4.0 * f64::EPSILON * times[k] {
                    return Err(DynamicsError::NonUniformGrid { index: k, step, expected: dt });
                }
            }
            let u = propagator(op, dt, 0.0)?;
            for k in 1..times.len() {
                let s = if k % REFRESH_INTERVAL == 0 {
                    propagator(op, times[k], times[k - 1])?.matvec(state0)?
                } else {
                    u.matvec(&out[k - 1])?
                };
                check_amplitude(&s, times[k - 1])?;
                out.push(s);
            }
        }
        Method::Rk4 { substep } => {
            if !(substep > 0.0 && substep.is_finite()) {
                return Err(DynamicsError::InvalidGrid(format!("rk4 substep {substep}")));
            }
            let g = op.scale(Complex64::new(0.0, -1.0));
            for k in 1..times.len() {
                let span = times[k] - times[k - 1];
                let count = ((span / substep) - 1e-9).ceil().max(1.0) as usize;
                let h = span / count as f64;
                let mut s = out[k - 1].clone();
                for _ in 0..count {
                    s = rk4_step(&g, &s, h)?;
                }
                check_amplitude(&s, times[k - 1])?;
                out.push(s);
            }
        }
    }
    Ok(out)
}

fn rk4_step(
    g: &DenseComplexMatrix,
    s: &ComplexVector,
    h: f64,
) -> Result<ComplexVector, LinalgError> {
    let half = Complex64::new(0.5 * h, 0.0);
    let full = Complex64::new(h, 0.0);
    let k1 = g.matvec(s)?;
    let k2 = g.matvec(&s.axpy(half, &k1))?;
    let k3 = g.matvec(&s.axpy(half, &k2))?;
    let k4 = g.matvec(&s.axpy(full, &k3))?;
    let sixth = h / 6.0;
    Ok(ComplexVector(
        s.iter()
            .zip(k1.iter().zip(k2.iter()).zip(k3.iter().zip(k4.iter())))
            .map(|(x, ((a, b), (c, d)))| x + (a + 2.0 * b + 2.0 * c + d) * sixth)
            .collect(),
    ))
}
