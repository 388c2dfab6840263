use std::fmt::Write as _;

use nonrecip::dynamics::uniform_grid;
use nonrecip::model::{gauge_metric, DEFAULT_CLASSIFY_TOL};
use nonrecip::spectral::{DEFAULT_SPECTRAL_TOL, REAL_SPECTRUM_TOL};
use nonrecip::{
    analyze, build, check_pseudo_hermitian, fit_exponential_rate, fit_power_exponent,
    is_hermitian, is_normal, max_growth_rate, observables, peak_transient, propagate,
    propagate_biorthogonal, spectrum_is_real, Family, HamiltonianSpec, ObservableSeries,
    StateTrajectory,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{FitKind, FitRequest, FitSeries, Observe, ScenarioConfig};
use crate::CliError;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Predicates {
    pub hermitian: bool,
    pub normal: bool,
    /// `null` when no metric is constructed for this model.
    pub pseudo_hermitian: Option<bool>,
    pub spectrum_is_real: bool,
    pub defective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub spec: HamiltonianSpec,
    pub eigenvalues: Vec<ComplexJson>,
    pub predicates: Predicates,
    /// `null` when infinite.
    pub eigvec_condition: Option<f64>,
    pub max_growth_rate: f64,
}

pub fn spectrum(spec: &HamiltonianSpec) -> Result<SpectrumReport, CliError> {
    spec.validate().map_err(|e| CliError::Config(format!("model: {e}")))?;
    let h = build(spec).map_err(|e| CliError::Numerical(e.to_string()))?;
    let sd = analyze(&h, DEFAULT_SPECTRAL_TOL).map_err(|e| CliError::Numerical(e.to_string()))?;
    let hermitian = is_hermitian(&h, DEFAULT_CLASSIFY_TOL);
    let pseudo_hermitian = if hermitian {
        Some(true)
    } else {
        pseudo_hermitian_with_gauge_metric(spec, &h)?
    };
    Ok(SpectrumReport {
        spec: spec.clone(),
        eigenvalues: sd.eigenvalues.iter().map(|z| ComplexJson { re: z.re, im: z.im }).collect(),
        predicates: Predicates {
            hermitian,
            normal: is_normal(&h, DEFAULT_CLASSIFY_TOL),
            pseudo_hermitian,
            spectrum_is_real: spectrum_is_real(&sd, REAL_SPECTRUM_TOL),
            defective: sd.defective,
        },
        eigvec_condition: sd.eigvec_condition.is_finite().then_some(sd.eigvec_condition),
        max_growth_rate: max_growth_rate(&sd),
    })
}

/// Only open chains with both hoppings nonzero have a constructed metric.
fn pseudo_hermitian_with_gauge_metric(
    spec: &HamiltonianSpec,
    h: &nonrecip::DenseComplexMatrix,
) -> Result<Option<bool>, CliError> {
    if spec.family != Family::Chain || spec.beta != 0.0 || spec.t_l * spec.t_r <= 0.0 {
        return Ok(None);
    }
    let eta = gauge_metric(spec).map_err(|e| CliError::Numerical(e.to_string()))?;
    check_pseudo_hermitian(h, &eta, DEFAULT_CLASSIFY_TOL)
        .map(Some)
        .map_err(|e| CliError::Numerical(e.to_string()))
}

pub fn spectrum_json(report: &SpectrumReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("serializable");
    s.push('\n');
    s
}

pub fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut out = String::from("k,re,im\n");
    for (k, z) in report.eigenvalues.iter().enumerate() {
        writeln!(out, "{k},{},{}", num(z.re), num(z.im)).unwrap();
    }
    out
}

/// Evolved trajectory plus derived observables.
pub struct EvolveResult {
    pub trajectory: StateTrajectory,
    pub observables: ObservableSeries,
    pub fits: Vec<FitResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitResult {
    pub series: String,
    pub kind: String,
    pub window: (f64, f64),
    pub value: f64,
}

pub fn evolve(cfg: &ScenarioConfig) -> Result<EvolveResult, CliError> {
    cfg.validate()?;
    let h = build(&cfg.model).map_err(|e| CliError::Numerical(e.to_string()))?;
    let times = uniform_grid(cfg.t_max, cfg.dt).map_err(|e| CliError::Config(e.to_string()))?;
    let psi0 = cfg.initial_vector();
    let traj = if cfg.wants_left() {
        propagate_biorthogonal(&h, &psi0, &psi0, &times, cfg.method)
    } else {
        propagate(&h, &psi0, &times, cfg.method)
    }
    .map_err(|e| CliError::Numerical(e.to_string()))?
    .with_spec(cfg.model.clone());
    let obs = observables(&traj);
    let fits = cfg
        .fits
        .iter()
        .map(|f| run_fit(&obs, f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EvolveResult { trajectory: traj, observables: obs, fits })
}

fn fit_series(obs: &ObservableSeries, series: &FitSeries) -> Vec<(f64, f64)> {
    match series {
        FitSeries::Norm => obs.norm_series(),
        FitSeries::LeftNorm => obs.left_norm_series().unwrap_or_default(),
        FitSeries::Site(k) => obs.site_series(*k),
    }
}

fn run_fit(obs: &ObservableSeries, f: &FitRequest) -> Result<FitResult, CliError> {
    let data = fit_series(obs, &f.series);
    let value = match f.kind {
        FitKind::Exp => fit_exponential_rate(&data, f.window),
        FitKind::Power => fit_power_exponent(&data, f.window),
    }
    .map_err(|e| CliError::Numerical(format!("fit {} {}: {e}", f.kind, f.series)))?;
    Ok(FitResult {
        series: f.series.to_string(),
        kind: f.kind.to_string(),
        window: f.window,
        value,
    })
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Long-format CSV, one row per `(t, j)`.
pub fn evolve_csv(cfg: &ScenarioConfig, res: &EvolveResult) -> String {
    let left = cfg.observe.contains(&Observe::Left);
    let bi = cfg.observe.contains(&Observe::Biorthogonal);
    let signed = cfg.observe.contains(&Observe::SignedLog);
    let traj = &res.trajectory;
    let obs = &res.observables;

    let mut out = String::from("t,j,re_x,im_x,abs_x");
    if left {
        out.push_str(",re_y,im_y,abs_y");
    }
    if bi {
        out.push_str(",re_yx,im_yx");
    }
    out.push_str(",norm_euclid");
    if bi {
        out.push_str(",bi_norm");
    }
    if signed {
        out.push_str(",signed_log_yx");
    }
    out.push('\n');

    let n = cfg.model.dim();
    for (k, &t) in traj.times.iter().enumerate() {
        for j in 0..n {
            let x = traj.psi[k][j];
            write!(out, "{},{},{},{},{}", num(t), j + 1, num(x.re), num(x.im), num(x.norm()))
                .unwrap();
            if left {
                let y = traj.phi.as_ref().expect("left evolved")[k][j];
                write!(out, ",{},{},{}", num(y.re), num(y.im), num(y.norm())).unwrap();
            }
            if bi {
                let z = obs.bi_overlap.as_ref().expect("left evolved")[k][j];
                write!(out, ",{},{}", num(z.re), num(z.im)).unwrap();
            }
            write!(out, ",{}", num(obs.euclidean_norm[k])).unwrap();
            if bi {
                write!(out, ",{}", num(obs.bi_norm.as_ref().expect("left evolved")[k].re)).unwrap();
            }
            if signed {
                let v = obs.signed_log_overlap.as_ref().expect("left evolved")[k][j];
                write!(out, ",{}", num(v)).unwrap();
            }
            out.push('\n');
        }
    }
    out
}

#[derive(Serialize)]
struct SampleJson {
    t: f64,
    x: Vec<ComplexJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<Vec<ComplexJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    yx: Option<Vec<ComplexJson>>,
    norm_euclid: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bi_norm: Option<ComplexJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    signed_log_yx: Option<Vec<Option<f64>>>,
}

#[derive(Serialize)]
struct EvolveJson<'a> {
    spec: &'a HamiltonianSpec,
    method: &'static str,
    fits: &'a [FitResult],
    samples: Vec<SampleJson>,
}

/// JSON document with the same content as [`evolve_csv`]. Signed-log zeros are `null`.
pub fn evolve_json(cfg: &ScenarioConfig, res: &EvolveResult) -> String {
    let cj = |z: &nonrecip::Complex64| ComplexJson { re: z.re, im: z.im };
    let left = cfg.observe.contains(&Observe::Left);
    let bi = cfg.observe.contains(&Observe::Biorthogonal);
    let signed = cfg.observe.contains(&Observe::SignedLog);
    let traj = &res.trajectory;
    let obs = &res.observables;
    let samples = (0..traj.len())
        .map(|k| SampleJson {
            t: traj.times[k],
            x: traj.psi[k].iter().map(cj).collect(),
            y: left.then(|| traj.phi.as_ref().expect("left evolved")[k].iter().map(cj).collect()),
            yx: bi.then(|| obs.bi_overlap.as_ref().expect("left evolved")[k].iter().map(cj).collect()),
            norm_euclid: obs.euclidean_norm[k],
            bi_norm: bi.then(|| cj(&obs.bi_norm.as_ref().expect("left evolved")[k])),
            signed_log_yx: signed.then(|| {
                obs.signed_log_overlap.as_ref().expect("left evolved")[k]
                    .iter()
                    .map(|v| v.is_finite().then_some(*v))
                    .collect()
            }),
        })
        .collect();
    let doc = EvolveJson { spec: &cfg.model, method: cfg.method.name(), fits: &res.fits, samples };
    let mut s = serde_json::to_string(&doc).expect("serializable");
    s.push('\n');
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanAxis {
    Gamma,
    TR,
    Beta,
}

impl ScanAxis {
    pub fn name(self) -> &'static str {
        match self {
            ScanAxis::Gamma => "gamma",
            ScanAxis::TR => "t_r",
            ScanAxis::Beta => "beta",
        }
    }

    fn apply(self, spec: &mut HamiltonianSpec, v: f64) {
        match self {
            ScanAxis::Gamma => spec.gamma = v,
            ScanAxis::TR => spec.t_r = v,
            ScanAxis::Beta => spec.beta = v,
        }
    }
}

impl std::str::FromStr for ScanAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gamma" => Ok(ScanAxis::Gamma),
            "t_r" | "tr" => Ok(ScanAxis::TR),
            "beta" => Ok(ScanAxis::Beta),
            other => Err(format!("unknown scan axis `{other}` (gamma, t_r, beta)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub value: f64,
    pub defective: bool,
    pub max_growth_rate: f64,
    pub fitted: f64,
    pub peak_time: f64,
    pub peak_value: f64,
}

/// One row per axis value, computed in parallel on at most `jobs` threads
/// and returned in input order.
pub fn scan(
    base: &ScenarioConfig,
    axis: ScanAxis,
    values: &[f64],
    fit: &FitRequest,
    jobs: usize,
) -> Result<Vec<ScanRow>, CliError> {
    if values.len() < 2 {
        return Err(CliError::Config("scan axis needs at least 2 values".into()));
    }
    if base.model.family != Family::Chain {
        return Err(CliError::Config("scan axes apply to the chain family".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("jobs: {e}")))?;
    pool.install(|| {
        values
            .par_iter()
            .map(|&v| {
                let mut cfg = base.clone();
                axis.apply(&mut cfg.model, v);
                cfg.observe = [Observe::Right].into();
                cfg.fits = vec![fit.clone()];
                let sp = spectrum(&cfg.model)?;
                let res = evolve(&cfg).map_err(|e| at_point(axis, v, e))?;
                let (peak_time, peak_value) =
                    peak_transient(&res.observables.norm_series()).expect("nonempty");
                Ok(ScanRow {
                    value: v,
                    defective: sp.predicates.defective,
                    max_growth_rate: sp.max_growth_rate,
                    fitted: res.fits[0].value,
                    peak_time,
                    peak_value,
                })
            })
            .collect()
    })
}

fn at_point(axis: ScanAxis, v: f64, e: CliError) -> CliError {
    let tag = |m: String| format!("{} = {v}: {m}", axis.name());
    match e {
        CliError::Config(m) => CliError::Config(tag(m)),
        CliError::Numerical(m) => CliError::Numerical(tag(m)),
        CliError::Io(m) => CliError::Io(tag(m)),
    }
}

pub fn scan_csv(axis: ScanAxis, fit: &FitRequest, rows: &[ScanRow]) -> String {
    let mut out = format!(
        "{},defective,max_growth_rate,fitted_{}_{},peak_time,peak_value\n",
        axis.name(),
        fit.kind,
        fit.series.to_string().replace(':', "")
    );
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            num(r.value),
            r.defective,
            num(r.max_growth_rate),
            num(r.fitted),
            num(r.peak_time),
            num(r.peak_value)
        )
        .unwrap();
    }
    out
}
