//! Command-line front end.
//!
//! Subcommands: `state`, `sweep`, `regions`, `char-temps`, `verify` and
//! `preset <id>`. Numeric output is CSV (or `key=value` lines for single
//! states) with 12 significant digits and LF line endings. Temperatures
//! are given as `τ = T/Δε`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numerical failure.

pub mod config;
pub mod format;
pub mod presets;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::stat_core::{Statistics, DEFAULT_ALPHA};
use crate::two_level::{PlaneGrid, TwoLevelParams};
use config::ConfigFile;
use presets::{find_preset, presets, FigurePreset, PresetSetup, PRESET_IDS};
use report::{
    char_temps_report, eta_scan_csv, regions_csv, state_report, sweep_csv, sweep_points, SweepConfig,
    SystemConfig,
};
use verify::run_verification;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "levelstat",
    version,
    about = "Thermodynamics of fermions and bosons on degenerate levels with any particle number"
)]
pub struct Cli {
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one state and print it as key=value lines.
    State {
        #[command(flatten)]
        system: SystemArgs,
        /// Dimensionless temperature T/Δε; 0 gives the ground state.
        #[arg(long)]
        tau: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Temperature sweep as CSV.
    Sweep {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        grid: TauGridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Region map of the (φ = N/z1, η = z2/z1) plane with Φ = 0 boundaries.
    Regions {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        plane: PlaneArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Characteristic temperatures, region, entropies and heat-capacity jumps.
    CharTemps {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the built-in verification suite.
    Verify {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reproduce a stored parameter set (`--list` shows them).
    Preset {
        /// Preset identifier, e.g. fig3a.
        id: Option<String>,
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        grid: TauGridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct SystemArgs {
    /// fermi or bose.
    #[arg(long)]
    pub statistics: Option<String>,
    /// Degeneracy of the lower level.
    #[arg(long)]
    pub z1: Option<f64>,
    /// Degeneracy of the upper level.
    #[arg(long)]
    pub z2: Option<f64>,
    /// Total particle number (may be fractional).
    #[arg(long)]
    pub n: Option<f64>,
    /// Level spacing ε2 − ε1 [default: 1].
    #[arg(long = "delta-eps")]
    pub delta_eps: Option<f64>,
    /// Lower level energy [default: Δε].
    #[arg(long)]
    pub eps1: Option<f64>,
    /// Volume exponent of the level energies [default: 2/3].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Volume [default: 1].
    #[arg(long)]
    pub volume: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TauGridArgs {
    /// Smallest τ [default: 0.01].
    #[arg(long = "tau-min")]
    pub tau_min: Option<f64>,
    /// Largest τ [default: 10].
    #[arg(long = "tau-max")]
    pub tau_max: Option<f64>,
    /// Number of grid points [default: 200].
    #[arg(long)]
    pub points: Option<usize>,
    /// Geometric instead of uniform spacing.
    #[arg(long)]
    pub log: bool,
    /// μ, E, p and the coefficients in raw units plus a T column.
    #[arg(long)]
    pub raw: bool,
    /// Also write a matplotlib script that plots the CSV.
    #[arg(long = "plot-script", value_name = "FILE")]
    pub plot_script: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PlaneArgs {
    #[arg(long = "phi-min", default_value_t = 0.01)]
    pub phi_min: f64,
    #[arg(long = "phi-max", default_value_t = 2.0)]
    pub phi_max: f64,
    #[arg(long = "phi-points", default_value_t = 200)]
    pub phi_points: usize,
    #[arg(long = "eta-min", default_value_t = 0.01)]
    pub eta_min: f64,
    #[arg(long = "eta-max", default_value_t = 100.0)]
    pub eta_max: f64,
    #[arg(long = "eta-points", default_value_t = 200)]
    pub eta_points: usize,
    /// Uniform instead of geometric spacing along η.
    #[arg(long = "eta-linear")]
    pub eta_linear: bool,
    /// Also list the label changes along η on this φ-line.
    #[arg(long = "transitions-at", value_name = "PHI")]
    pub transitions_at: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output file [default: stdout].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

/// Failure of a CLI run, mapped onto an exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(Error),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Verification(_) => EXIT_VERIFY,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSystem(_) | Error::InfeasibleParticleNumber { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Primary output goes to `stdout` unless `--out`
/// is given; diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_CONFIG
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "levelstat: {e}");
            e.exit_code()
        }
    }
}

fn load_config(cli: &Cli) -> CliResult<ConfigFile> {
    match &cli.config {
        Some(path) => ConfigFile::load(path).map_err(CliError::Config),
        None => Ok(ConfigFile::default()),
    }
}

fn pick<T: std::str::FromStr>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> CliResult<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key).map_err(CliError::Config),
    }
}

fn require<T>(v: Option<T>, key: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Config(format!("missing --{key} (flag or config key)")))
}

fn statistics_of(args: &SystemArgs, cfg: &ConfigFile) -> CliResult<Statistics> {
    let raw = require(
        args.statistics.clone().or_else(|| cfg.raw("statistics").map(str::to_string)),
        "statistics",
    )?;
    raw.parse().map_err(CliError::Config)
}

fn system_config(args: &SystemArgs, cfg: &ConfigFile) -> CliResult<SystemConfig> {
    let statistics = statistics_of(args, cfg)?;
    let z1 = require(pick(args.z1, cfg, "z1")?, "z1")?;
    let z2 = require(pick(args.z2, cfg, "z2")?, "z2")?;
    let n = require(pick(args.n, cfg, "n")?, "n")?;
    let delta_eps = pick(args.delta_eps, cfg, "delta-eps")?.unwrap_or(1.0);
    let eps1 = pick(args.eps1, cfg, "eps1")?.unwrap_or(delta_eps);
    let alpha = pick(args.alpha, cfg, "alpha")?.unwrap_or(DEFAULT_ALPHA);
    let volume = pick(args.volume, cfg, "volume")?.unwrap_or(1.0);
    let sys = SystemConfig {
        statistics,
        params: TwoLevelParams::new(z1, z2, n, delta_eps).with_eps1(eps1),
        alpha,
        volume,
    };
    sys.system()?;
    Ok(sys)
}

fn sweep_config(system: SystemConfig, grid: &TauGridArgs, cfg: &ConfigFile, defaults: (f64, f64, usize, bool)) -> CliResult<SweepConfig> {
    let log = grid.log || pick(None, cfg, "log")?.unwrap_or(defaults.3);
    let raw = grid.raw || pick(None, cfg, "raw")?.unwrap_or(false);
    let sweep = SweepConfig {
        system,
        tau_min: pick(grid.tau_min, cfg, "tau-min")?.unwrap_or(defaults.0),
        tau_max: pick(grid.tau_max, cfg, "tau-max")?.unwrap_or(defaults.1),
        points: pick(grid.points, cfg, "points")?.unwrap_or(defaults.2),
        log,
        raw,
    };
    sweep.check()?;
    Ok(sweep)
}

fn check_format(output: &OutputArgs, cfg: &ConfigFile) -> CliResult<()> {
    if output.format.is_none() {
        if let Some(f) = cfg.raw("format") {
            if f != "csv" {
                return Err(CliError::Config(format!("unsupported format '{f}'")));
            }
        }
    }
    Ok(())
}

fn emit(text: &str, output: &OutputArgs, cfg: &ConfigFile, stdout: &mut dyn Write) -> CliResult<()> {
    check_format(output, cfg)?;
    let out: Option<PathBuf> = match &output.out {
        Some(p) => Some(p.clone()),
        None => cfg.raw("out").map(PathBuf::from),
    };
    match out {
        Some(path) if path.as_os_str() != "-" => {
            std::fs::write(&path, text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        }
        _ => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Config(format!("stdout: {e}"))),
    }
}

/// Kind of CSV a plotting script is written for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Sweep,
    Regions,
    EtaScan,
}

/// A standalone matplotlib script that reads `csv_path` (or its first
/// argument) and writes a PNG next to it.
pub fn plot_script(kind: PlotKind, csv_path: &str) -> String {
    let body = match kind {
        PlotKind::Sweep => {
            "fig, ax = plt.subplots()\n\
             for col in [\"S\", \"C_V\", \"C_p\"]:\n    ax.plot(df[\"tau\"], df[col], label=col)\n\
             ax.set_xscale(\"log\")\nax.set_xlabel(\"tau\")\nax.legend()\n"
        }
        PlotKind::Regions => {
            "fig, ax = plt.subplots()\n\
             cells = df[df.record == \"cell\"]\n\
             for label, g in cells.groupby(\"label\"):\n    ax.scatter(g.phi, g.eta, s=4, label=label)\n\
             for name, g in df[df.record == \"boundary\"].groupby(\"label\"):\n    ax.plot(g.phi, g.eta, \"k-\", lw=1)\n\
             ax.set_yscale(\"log\")\nax.set_xlabel(\"phi\")\nax.set_ylabel(\"eta\")\nax.legend(markerscale=4)\n"
        }
        PlotKind::EtaScan => {
            "fig, ax = plt.subplots()\n\
             for col in [c for c in df.columns if c.startswith(\"tau_\")]:\n    ax.plot(df[\"eta\"], df[col], label=col)\n\
             ax.set_xscale(\"log\")\nax.set_yscale(\"log\")\nax.set_xlabel(\"eta\")\nax.legend()\n"
        }
    };
    format!(
        "import sys\n\
         import matplotlib.pyplot as plt\n\
         import pandas as pd\n\n\
         path = sys.argv[1] if len(sys.argv) > 1 else {csv_path:?}\n\
         df = pd.read_csv(path, comment=\"#\")\n\
         {body}\
         fig.savefig(path.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n"
    )
}

fn write_plot_script(path: &Option<PathBuf>, kind: PlotKind, output: &OutputArgs) -> CliResult<()> {
    if let Some(script) = path {
        let csv = output
            .out
            .as_deref()
            .map(Path::to_string_lossy)
            .map(|s| s.into_owned())
            .unwrap_or_else(|| "data.csv".into());
        std::fs::write(script, plot_script(kind, &csv))
            .map_err(|e| CliError::Config(format!("{}: {e}", script.display())))?;
    }
    Ok(())
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::State { system, tau, output } => {
            let sys = system_config(system, &cfg)?;
            let tau = require(pick(*tau, &cfg, "tau")?, "tau")?;
            emit(&state_report(&sys, tau)?, output, &cfg, stdout)
        }
        Command::Sweep { system, grid, output } => {
            let sys = system_config(system, &cfg)?;
            let sweep = sweep_config(sys, grid, &cfg, (0.01, 10.0, 200, false))?;
            let points = sweep_points(&sweep)?;
            emit(&sweep_csv(&sweep, &points), output, &cfg, stdout)?;
            write_plot_script(&grid.plot_script, PlotKind::Sweep, output)
        }
        Command::Regions { system, plane, output } => {
            let kind = statistics_of(system, &cfg)?;
            let n = require(pick(system.n, &cfg, "n")?, "n")?;
            let grid = PlaneGrid {
                phi_min: plane.phi_min,
                phi_max: plane.phi_max,
                phi_points: plane.phi_points,
                eta_min: plane.eta_min,
                eta_max: plane.eta_max,
                eta_points: plane.eta_points,
                eta_log: !plane.eta_linear,
            };
            emit(&regions_csv(kind, n, &grid, plane.transitions_at)?, output, &cfg, stdout)
        }
        Command::CharTemps { system, output } => {
            let sys = system_config(system, &cfg)?;
            emit(&char_temps_report(&sys)?, output, &cfg, stdout)
        }
        Command::Verify { output } => {
            let report = run_verification(&presets());
            emit(&report.render(), output, &cfg, stdout)?;
            if report.passed() {
                Ok(())
            } else {
                let names: Vec<_> = report.failures().iter().map(|c| c.name.clone()).collect();
                Err(CliError::Verification(names.join(", ")))
            }
        }
        Command::Preset {
            id,
            list,
            grid,
            output,
        } => {
            if *list {
                let mut text = String::new();
                for p in presets() {
                    text.push_str(&format!("{}\t{}\t{}\n", p.id, p.statistics.name(), p.source));
                }
                return emit(&text, output, &cfg, stdout);
            }
            let id = require(id.clone(), "id")?;
            let preset = find_preset(&id).ok_or_else(|| {
                CliError::Config(format!("unknown preset '{id}' (one of {})", PRESET_IDS.join(", ")))
            })?;
            run_preset(&preset, grid, output, &cfg, stdout)
        }
    }
}

fn run_preset(
    preset: &FigurePreset,
    grid: &TauGridArgs,
    output: &OutputArgs,
    cfg: &ConfigFile,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let kind = preset.statistics;
    match preset.setup {
        PresetSetup::Sweep {
            z1,
            z2,
            n,
            tau_min,
            tau_max,
        } => {
            let sys = SystemConfig::new(kind, TwoLevelParams::new(z1, z2, n, 1.0));
            let sweep = sweep_config(sys, grid, cfg, (tau_min, tau_max, 400, true))?;
            let points = sweep_points(&sweep)?;
            emit(&sweep_csv(&sweep, &points), output, cfg, stdout)?;
            write_plot_script(&grid.plot_script, PlotKind::Sweep, output)
        }
        PresetSetup::EtaScan {
            z1,
            n,
            eta_min,
            eta_max,
        } => {
            let count = pick(grid.points, cfg, "points")?.unwrap_or(400).max(2);
            let etas: Vec<f64> = (0..count)
                .map(|i| eta_min * (eta_max / eta_min).powf(i as f64 / (count - 1) as f64))
                .collect();
            emit(&eta_scan_csv(kind, z1, n, &etas)?, output, cfg, stdout)?;
            write_plot_script(&grid.plot_script, PlotKind::EtaScan, output)
        }
        PresetSetup::Plane { n, .. } => {
            let count = pick(grid.points, cfg, "points")?.unwrap_or(200).max(2);
            let plane = preset.plane_grid(count, count).expect("plane preset");
            emit(&regions_csv(kind, n, &plane, None)?, output, cfg, stdout)?;
            write_plot_script(&grid.plot_script, PlotKind::Regions, output)
        }
    }
}
