//! Scenario files.
//!
//! ```toml
//! initial_site = 10
//! t_max = 100.0
//! dt = 0.01
//! method = "expm-step"
//! observe = ["right", "left", "biorthogonal"]
//!
//! [model]
//! family = "chain"
//! n = 10
//! t_l = 1.0
//! t_r = 0.0
//! gamma = 0.0
//! beta = 0.0
//!
//! [[fits]]
//! series = "site:1"
//! kind = "power"
//! window = [10.0, 100.0]
//!
//! [output]
//! path = "fig2b.csv"
//! format = "csv"
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nonrecip::dynamics::{localized_state, DEFAULT_DT};
use nonrecip::{Complex64, ComplexVector, HamiltonianSpec, Method};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observe {
    Right,
    Left,
    Biorthogonal,
    SignedLog,
}

impl FromStr for Observe {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "right" => Ok(Observe::Right),
            "left" => Ok(Observe::Left),
            "biorthogonal" => Ok(Observe::Biorthogonal),
            "signed_log" => Ok(Observe::SignedLog),
            other => Err(format!("unknown observable `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    Exp,
    Power,
}

impl fmt::Display for FitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitKind::Exp => "exp",
            FitKind::Power => "power",
        })
    }
}

/// Which real series a fit reads: `norm`, `left_norm` or `site:<k>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FitSeries {
    Norm,
    LeftNorm,
    Site(usize),
}

impl TryFrom<String> for FitSeries {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        match s.as_str() {
            "norm" => Ok(FitSeries::Norm),
            "left_norm" => Ok(FitSeries::LeftNorm),
            other => other
                .strip_prefix("site:")
                .and_then(|k| k.parse().ok())
                .map(FitSeries::Site)
                .ok_or_else(|| format!("unknown fit series `{other}`")),
        }
    }
}

impl From<FitSeries> for String {
    fn from(s: FitSeries) -> String {
        s.to_string()
    }
}

impl fmt::Display for FitSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitSeries::Norm => f.write_str("norm"),
            FitSeries::LeftNorm => f.write_str("left_norm"),
            FitSeries::Site(k) => write!(f, "site:{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitRequest {
    pub series: FitSeries,
    pub kind: FitKind,
    pub window: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// One run: model, initial state, time grid and requested outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: HamiltonianSpec,
    /// One-based site of a localized initial state. Ignored when `initial_state` is set.
    pub initial_site: usize,
    /// Explicit initial state as `[re, im]` pairs; normalized before use.
    pub initial_state: Option<Vec<(f64, f64)>>,
    pub t_max: f64,
    pub dt: f64,
    #[serde(with = "method_name")]
    pub method: Method,
    pub observe: BTreeSet<Observe>,
    pub fits: Vec<FitRequest>,
    pub output: OutputSpec,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            model: HamiltonianSpec::default(),
            initial_site: 10,
            initial_state: None,
            t_max: 100.0,
            dt: DEFAULT_DT,
            method: Method::ExpmStep,
            observe: [Observe::Right].into(),
            fits: Vec::new(),
            output: OutputSpec::default(),
        }
    }
}

mod method_name {
    use nonrecip::Method;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Method, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(m.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Method, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn wants_left(&self) -> bool {
        self.observe.iter().any(|o| *o != Observe::Right)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.model
            .validate()
            .map_err(|e| CliError::Config(format!("model: {e}")))?;
        let n = self.model.dim();
        match &self.initial_state {
            Some(v) if v.len() != n => {
                return Err(field("initial_state", format!("has {} entries, model has {n}", v.len())))
            }
            Some(v) if v.iter().all(|&(a, b)| a == 0.0 && b == 0.0) => {
                return Err(field("initial_state", "is the zero vector".into()))
            }
            Some(v) if v.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) => {
                return Err(field("initial_state", "has non-finite entries".into()))
            }
            Some(_) => {}
            None if !(1..=n).contains(&self.initial_site) => {
                return Err(field("initial_site", format!("{} outside 1..={n}", self.initial_site)))
            }
            None => {}
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(field("dt", format!("{} must be positive", self.dt)));
        }
        if !(self.t_max > self.dt && self.t_max.is_finite()) {
            return Err(field("t_max", format!("{} must exceed dt = {}", self.t_max, self.dt)));
        }
        if let Method::Rk4 { substep } = self.method {
            if !(substep > 0.0) {
                return Err(field("method", "rk4 substep must be positive".into()));
            }
        }
        for fit in &self.fits {
            let (lo, hi) = fit.window;
            if !(lo < hi) {
                return Err(field("fits.window", format!("({lo}, {hi}) is empty")));
            }
            if fit.kind == FitKind::Power && lo <= 0.0 {
                return Err(field("fits.window", "power fits need a window starting after 0".into()));
            }
            match fit.series {
                FitSeries::Site(k) if !(1..=n).contains(&k) => {
                    return Err(field("fits.series", format!("site {k} outside 1..={n}")))
                }
                FitSeries::LeftNorm if !self.wants_left() => {
                    return Err(field("fits.series", "left_norm needs a left observable".into()))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Unit-norm initial state.
    pub fn initial_vector(&self) -> ComplexVector {
        match &self.initial_state {
            Some(v) => {
                ComplexVector(v.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).normalized()
            }
            None => localized_state(self.model.dim(), self.initial_site).expect("validated"),
        }
    }
}

fn field(name: &str, msg: String) -> CliError {
    CliError::Config(format!("{name}: {msg}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nonrecip::Family;

    #[test]
    fn parses_documented_example() {
        let text = r#"
initial_site = 10
t_max = 100.0
dt = 0.01
method = "rk4"
observe = ["right", "left", "biorthogonal"]

[model]
family = "chain"
n = 10
t_l = 1.0
t_r = 0.0
gamma = 0.0
beta = 0.0

[[fits]]
series = "site:1"
kind = "power"
window = [10.0, 100.0]

[output]
path = "fig2b.csv"
format = "csv"
"#;
        let cfg = ScenarioConfig::from_toml(text).unwrap();
        assert_eq!(cfg.model.family, Family::Chain);
        assert_eq!(cfg.model.beta, 0.0);
        assert_eq!(cfg.method.name(), "rk4");
        assert_eq!(cfg.fits[0].series, FitSeries::Site(1));
        assert!(cfg.observe.contains(&Observe::Biorthogonal));
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_unknown_keys_and_bad_fields() {
        assert!(ScenarioConfig::from_toml("tmax = 3.0").is_err());
        assert!(ScenarioConfig::from_toml("[model]\nt_left = 1.0").is_err());
        let cfg = ScenarioConfig { initial_site: 11, ..Default::default() };
        assert!(matches!(cfg.validate(), Err(CliError::Config(m)) if m.starts_with("initial_site")));
        let cfg = ScenarioConfig { dt: 0.0, ..Default::default() };
        assert!(matches!(cfg.validate(), Err(CliError::Config(m)) if m.starts_with("dt")));
        let cfg = ScenarioConfig { t_max: 0.005, ..Default::default() };
        assert!(matches!(cfg.validate(), Err(CliError::Config(m)) if m.starts_with("t_max")));
    }

    #[test]
    fn explicit_state_is_normalized() {
        let mut cfg = ScenarioConfig::default();
        cfg.model = HamiltonianSpec::jordan2();
        cfg.initial_state = Some(vec![(3.0, 0.0), (0.0, 4.0)]);
        cfg.validate().unwrap();
        let v = cfg.initial_vector();
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert!((v[1] - Complex64::new(0.0, 0.8)).norm() < 1e-15);
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = ScenarioConfig {
            fits: vec![FitRequest { series: FitSeries::Norm, kind: FitKind::Exp, window: (20.0, 50.0) }],
            ..Default::default()
        };
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(ScenarioConfig::from_toml(&text).unwrap(), cfg);
    }
}
