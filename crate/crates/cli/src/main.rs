use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nonrecip::{Family, Method};
use nonrecip_cli::config::{FitKind, FitRequest, FitSeries, Format, Observe, ScenarioConfig};
use nonrecip_cli::presets::{preset, PRESET_NAMES};
use nonrecip_cli::run::{self, ScanAxis};
use nonrecip_cli::{write_atomic, CliError};

#[derive(Parser)]
#[command(name = "nonrecip", version, about = "Spectra and dynamics of nonreciprocal chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, structure predicates and max growth rate (JSON by default)
    Spectrum(Common),
    /// Time evolution written as long-format CSV
    Evolve(Common),
    /// Sweep gamma, t_r or beta and tabulate growth measures
    Scan(ScanArgs),
    /// Run a named figure preset
    Figure {
        /// fig2a..fig5f, ep-right, ep-left
        preset: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML scenario file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_name = "chain|jordan2|jordan2-loss|pt2")]
    model: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    tl: Option<f64>,
    #[arg(long)]
    tr: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Localized initial state, `site:<k>` (one-based)
    #[arg(long, value_parser = parse_init)]
    init: Option<usize>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, value_name = "expm-step|expm-direct|rk4")]
    method: Option<Method>,
    /// Comma-separated subset of right,left,biorthogonal,signed_log
    #[arg(long, value_delimiter = ',')]
    observe: Option<Vec<Observe>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_name = "csv|json")]
    format: Option<Format>,
    /// Worker threads for scans
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct ScanArgs {
    /// gamma, t_r or beta
    #[arg(long)]
    axis: ScanAxis,
    /// Comma-separated axis values
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    /// Start from a figure preset instead of the defaults
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value = "exp", value_parser = parse_fit_kind)]
    fit: FitKind,
    /// Fit window `lo,hi`; defaults to the preset windows for the fit kind
    #[arg(long, value_delimiter = ',', num_args = 2)]
    window: Option<Vec<f64>>,
    #[command(flatten)]
    common: Common,
}

fn parse_init(s: &str) -> Result<usize, String> {
    s.strip_prefix("site:")
        .and_then(|k| k.parse().ok())
        .ok_or_else(|| format!("expected site:<k>, got `{s}`"))
}

fn parse_fit_kind(s: &str) -> Result<FitKind, String> {
    match s {
        "exp" => Ok(FitKind::Exp),
        "power" => Ok(FitKind::Power),
        other => Err(format!("unknown fit kind `{other}` (exp, power)")),
    }
}

impl Common {
    fn resolve(&self, base: Option<ScenarioConfig>) -> Result<ScenarioConfig, CliError> {
        let mut cfg = match (&self.config, base) {
            (Some(path), _) => ScenarioConfig::load(path)?,
            (None, Some(b)) => b,
            (None, None) => ScenarioConfig::default(),
        };
        let m = &mut cfg.model;
        if let Some(v) = self.model {
            m.family = v;
        }
        if let Some(v) = self.n {
            m.n = v;
        }
        if let Some(v) = self.tl {
            m.t_l = v;
        }
        if let Some(v) = self.tr {
            m.t_r = v;
        }
        if let Some(v) = self.gamma {
            m.gamma = v;
        }
        if let Some(v) = self.beta {
            m.beta = v;
        }
        if let Some(v) = self.init {
            cfg.initial_site = v;
            cfg.initial_state = None;
        }
        if let Some(v) = self.t_max {
            cfg.t_max = v;
        }
        if let Some(v) = self.dt {
            cfg.dt = v;
        }
        if let Some(v) = self.method {
            cfg.method = v;
        }
        if let Some(v) = &self.observe {
            cfg.observe = v.iter().copied().collect();
        }
        if let Some(v) = &self.out {
            cfg.output.path = Some(v.clone());
        }
        if let Some(v) = self.format {
            cfg.output.format = v;
        }
        // fits that no longer fit the model are dropped rather than rejected
        let n = cfg.model.dim();
        cfg.fits.retain(|f| !matches!(f.series, FitSeries::Site(k) if k > n));
        Ok(cfg)
    }
}

fn emit(cfg: &ScenarioConfig, contents: &str) -> Result<(), CliError> {
    match &cfg.output.path {
        Some(path) => write_atomic(path, contents),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(contents.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn evolve_and_emit(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let res = run::evolve(cfg)?;
    for f in &res.fits {
        eprintln!(
            "fit {} {} [{}, {}] = {:.10}",
            f.kind, f.series, f.window.0, f.window.1, f.value
        );
    }
    let text = match cfg.output.format {
        Format::Csv => run::evolve_csv(cfg, &res),
        Format::Json => run::evolve_json(cfg, &res),
    };
    emit(cfg, &text)
}

fn lookup_preset(name: &str) -> Result<ScenarioConfig, CliError> {
    preset(name).ok_or_else(|| {
        CliError::Config(format!("unknown preset `{name}` (one of {})", PRESET_NAMES.join(", ")))
    })
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(common) => {
            let mut cfg = common.resolve(None)?;
            if common.format.is_none() {
                cfg.output.format = Format::Json;
            }
            let report = run::spectrum(&cfg.model)?;
            let text = match cfg.output.format {
                Format::Json => run::spectrum_json(&report),
                Format::Csv => run::spectrum_csv(&report),
            };
            emit(&cfg, &text)
        }
        Command::Evolve(common) => evolve_and_emit(&common.resolve(None)?),
        Command::Figure { preset, common } => {
            let mut cfg = common.resolve(Some(lookup_preset(&preset)?))?;
            if cfg.output.path.is_none() {
                let ext = match cfg.output.format {
                    Format::Csv => "csv",
                    Format::Json => "json",
                };
                cfg.output.path = Some(PathBuf::from(format!("{preset}.{ext}")));
            }
            evolve_and_emit(&cfg)
        }
        Command::Scan(args) => {
            let base = args.preset.as_deref().map(lookup_preset).transpose()?;
            let cfg = args.common.resolve(base)?;
            let window = match (&args.window, args.fit) {
                (Some(w), _) => (w[0], w[1]),
                (None, FitKind::Exp) => nonrecip_cli::presets::EXP_WINDOW,
                (None, FitKind::Power) => nonrecip_cli::presets::POWER_WINDOW,
            };
            let fit = FitRequest { series: FitSeries::Norm, kind: args.fit, window };
            let rows = run::scan(&cfg, args.axis, &args.values, &fit, args.common.jobs)?;
            emit(&cfg, &run::scan_csv(args.axis, &fit, &rows))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nonrecip: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
