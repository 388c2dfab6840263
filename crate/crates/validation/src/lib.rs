//! Closed-form reference solutions, derived by hand and kept independent of
//! the propagators they check.

use num_complex::Complex64;

pub fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Open unidirectional chain of `n` sites started on site `n`:
/// `x_j(t) = (−it)^{n−j}/(n−j)!`, `j` one-based.
pub fn unidirectional_amplitude(n: usize, j: usize, t: f64) -> Complex64 {
    let p = (n - j) as u32;
    Complex64::new(0.0, -t).powu(p) / factorial(p)
}

/// `‖x(t)‖` for the same chain with uniform loss `gamma`:
/// `e^{−γt}·√(Σ_{k<n} t^{2k}/(k!)²)`.
pub fn lossy_unidirectional_norm(n: usize, gamma: f64, t: f64) -> f64 {
    let s: f64 = (0..n as u32).map(|k| t.powi(2 * k as i32) / factorial(k).powi(2)).sum();
    (-gamma * t).exp() * s.sqrt()
}

/// PT dimer at its exceptional point with net loss `g0`, started on the left
/// eigenvector `(−i, 1)/√2`. `H = −iγ0·I + A` with `A² = 0`, so
/// `e^{−iHt} = e^{−γ0 t}(I − iAt)` and the norm is `e^{−γ0 t}·√(1 + 4t²)`.
pub fn exceptional_left_norm(g0: f64, t: f64) -> f64 {
    (-g0 * t).exp() * (1.0 + 4.0 * t * t).sqrt()
}

/// Larger root of `4t/(1 + 4t²) = γ0`, the maximum of [`exceptional_left_norm`].
pub fn exceptional_peak_time(g0: f64) -> f64 {
    (1.0 + (1.0 - g0 * g0).sqrt()) / (2.0 * g0)
}

/// `max Im λ` of the periodic chain, `λ_k = t_l ω^k + t_r ω^{−k} − iγ`.
pub fn ring_growth_rate(n: usize, t_l: f64, t_r: f64, gamma: f64) -> f64 {
    (0..n)
        .map(|k| (t_l - t_r) * (2.0 * std::f64::consts::PI * k as f64 / n as f64).sin() - gamma)
        .fold(f64::NEG_INFINITY, f64::max)
}
