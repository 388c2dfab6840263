use super::DynamicsError;

/// Minimum number of samples inside a fit window.
pub const MIN_FIT_SAMPLES: usize = 8;

fn window_points(
    series: &[(f64, f64)],
    (lo, hi): (f64, f64),
) -> Result<Vec<(f64, f64)>, DynamicsError> {
    let pts: Vec<(f64, f64)> =
        series.iter().copied().filter(|&(t, _)| t >= lo && t <= hi).collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(DynamicsError::InsufficientSamples {
            lo,
            hi,
            found: pts.len(),
            required: MIN_FIT_SAMPLES,
        });
    }
    if let Some(&(t, value)) = pts.iter().find(|&&(_, v)| !(v > 0.0 && v.is_finite())) {
        return Err(DynamicsError::NonPositiveValue { t, value });
    }
    Ok(pts)
}

fn least_squares_slope(xs: impl Iterator<Item = (f64, f64)> + Clone) -> f64 {
    let n = xs.clone().count() as f64;
    let (sx, sy) = xs.clone().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = xs.fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    sxy / sxx
}

/// Least-squares slope of `ln(value)` against `t` over `window`.
pub fn fit_exponential_rate(
    series: &[(f64, f64)],
    window: (f64, f64),
) -> Result<f64, DynamicsError> {
    let pts = window_points(series, window)?;
    Ok(least_squares_slope(pts.iter().map(|&(t, v)| (t, v.ln()))))
}

/// Least-squares slope of `ln(value)` against `ln(t)` over `window`.
pub fn fit_power_exponent(
    series: &[(f64, f64)],
    window: (f64, f64),
) -> Result<f64, DynamicsError> {
    if window.0 <= 0.0 {
        return Err(DynamicsError::NonPositiveWindowStart(window.0));
    }
    let pts = window_points(series, window)?;
    Ok(least_squares_slope(pts.iter().map(|&(t, v)| (t.ln(), v.ln()))))
}

/// Sample maximum refined by the parabola through it and its two neighbours.
/// Returns `None` for an empty series.
pub fn peak_transient(series: &[(f64, f64)]) -> Option<(f64, f64)> {
    let (k, &(t1, v1)) = series
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, &(f64, f64))>, (k, p)| match best {
            Some((_, b)) if b.1 >= p.1 => best,
            _ => Some((k, p)),
        })?;
    if k == 0 || k + 1 == series.len() {
        return Some((t1, v1));
    }
    let (t0, v0) = series[k - 1];
    let (t2, v2) = series[k + 1];
    // divided differences of the interpolating parabola
    let d01 = (v1 - v0) / (t1 - t0);
    let d12 = (v2 - v1) / (t2 - t1);
    let curv = (d12 - d01) / (t2 - t0);
    if !(curv < 0.0) {
        return Some((t1, v1));
    }
    // p(t) = v0 + d01 (t - t0) + curv (t - t0)(t - t1)
    let t_peak = 0.5 * (t0 + t1) - d01 / (2.0 * curv);
    if !(t_peak > t0 && t_peak < t2) {
        return Some((t1, v1));
    }
    let v_peak = v0 + d01 * (t_peak - t0) + curv * (t_peak - t0) * (t_peak - t1);
    Some((t_peak, v_peak.max(v1)))
}
