use num_complex::Complex64;

use super::StateTrajectory;

/// Stand-in for `sgn(y*x)·log√|y*x|` where `y*x` is exactly zero.
pub const ZERO_OVERLAP_SENTINEL: f64 = f64::NAN;

/// Real time series derived from a trajectory. Matrices are indexed `[time][site]`.
#[derive(Clone, Debug)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    /// `|x_j(t)|`
    pub per_site_amplitude: Vec<Vec<f64>>,
    /// `‖x(t)‖`
    pub euclidean_norm: Vec<f64>,
    /// `|y_j(t)|`
    pub left_amplitude: Option<Vec<Vec<f64>>>,
    /// `‖y(t)‖`
    pub left_norm: Option<Vec<f64>>,
    /// `y_j*(t)·x_j(t)`; real for the chain family, imaginary parts kept for diagnostics.
    pub bi_overlap: Option<Vec<Vec<Complex64>>>,
    /// `Σ_j y_j* x_j`
    pub bi_norm: Option<Vec<Complex64>>,
    /// `sgn(y_j* x_j)·log√|y_j* x_j|`, [`ZERO_OVERLAP_SENTINEL`] where the overlap vanishes.
    pub signed_log_overlap: Option<Vec<Vec<f64>>>,
}

impl ObservableSeries {
    /// `(t, ‖x(t)‖)` pairs.
    pub fn norm_series(&self) -> Vec<(f64, f64)> {
        self.times.iter().copied().zip(self.euclidean_norm.iter().copied()).collect()
    }

    /// `(t, |x_site(t)|)` pairs for a one-based `site`.
    pub fn site_series(&self, site: usize) -> Vec<(f64, f64)> {
        self.times
            .iter()
            .zip(&self.per_site_amplitude)
            .map(|(&t, row)| (t, row[site - 1]))
            .collect()
    }

    /// `(t, ‖y(t)‖)` pairs, when a left state was evolved.
    pub fn left_norm_series(&self) -> Option<Vec<(f64, f64)>> {
        self.left_norm
            .as_ref()
            .map(|n| self.times.iter().copied().zip(n.iter().copied()).collect())
    }

    /// Largest `|Im(y_j* x_j)|` over the whole trajectory.
    pub fn max_overlap_imag(&self) -> Option<f64> {
        self.bi_overlap.as_ref().map(|rows| {
            rows.iter().flatten().map(|z| z.im.abs()).fold(0.0, f64::max)
        })
    }
}

pub fn observables(traj: &StateTrajectory) -> ObservableSeries {
    let amplitude = |states: &[crate::numkernel::ComplexVector]| -> Vec<Vec<f64>> {
        states.iter().map(|s| s.iter().map(|z| z.norm()).collect()).collect()
    };
    let per_site_amplitude = amplitude(&traj.psi);
    let euclidean_norm = traj.psi.iter().map(|s| s.norm()).collect();

    let (mut left_amplitude, mut left_norm) = (None, None);
    let (mut bi_overlap, mut bi_norm, mut signed_log_overlap) = (None, None, None);
    if let Some(phi) = &traj.phi {
        left_amplitude = Some(amplitude(phi));
        left_norm = Some(phi.iter().map(|s| s.norm()).collect());
        let overlaps: Vec<Vec<Complex64>> = traj
            .psi
            .iter()
            .zip(phi)
            .map(|(x, y)| x.iter().zip(y.iter()).map(|(xj, yj)| yj.conj() * xj).collect())
            .collect();
        bi_norm = Some(overlaps.iter().map(|row| row.iter().sum()).collect());
        signed_log_overlap = Some(
            overlaps
                .iter()
                .map(|row| row.iter().map(|&z| signed_log(z)).collect())
                .collect(),
        );
        bi_overlap = Some(overlaps);
    }

    ObservableSeries {
        times: traj.times.clone(),
        per_site_amplitude,
        euclidean_norm,
        left_amplitude,
        left_norm,
        bi_overlap,
        bi_norm,
        signed_log_overlap,
    }
}

fn signed_log(z: Complex64) -> f64 {
    let m = z.norm();
    if m == 0.0 {
        return ZERO_OVERLAP_SENTINEL;
    }
    // the overlap is real for the chain family; the real part carries the sign
    let sign = if z.re < 0.0 { -1.0 } else { 1.0 };
    sign * 0.5 * m.ln()
}
