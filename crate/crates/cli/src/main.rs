//! `ks-turing`: stability tables, simulations, cosine-series analysis and Galerkin
//! truncations of the chemotaxis model, written as CSV with a JSON manifest.

mod commands;
mod config;
mod error;
mod keywords;
mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use chemotaxis::Variant;
use clap::{Args, Parser, Subcommand};

use crate::config::{FloatList, Resolver};
use crate::error::CliError;
use crate::keywords::{GalerkinParam, IcKind, Maximise, ModelParam, SchemeArg, Target};
use crate::output::Session;

/// Every option can also come from a `KS_<NAME>` environment variable (e.g. `KS_CHI0`,
/// `KS_T_MAX`) or from a `name = value` line in the `--config` file. Precedence:
/// flag, environment, config file, default.
#[derive(Parser, Debug)]
#[command(name = "ks-turing", version, about, long_about = None)]
struct Cli {
    /// Flat `key = value` file with defaults for any option (keys are the long option names).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for sweeps [default: all cores].
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Instability factor, unstable band and linear wavelengths at one parameter point.
    Stability(StabilityArgs),
    /// Stability table over a range of one parameter, or the R_T = 1 boundary curve.
    StabilitySweep(StabilitySweepArgs),
    /// Integrates the PDE and writes x,n,c snapshots.
    Simulate(SimulateArgs),
    /// Front speed from snapshot files (time is read from the `_t<time>.csv` suffix).
    FrontSpeed(FrontSpeedArgs),
    /// Cosine-series coefficients of a profile.
    Decompose(DecomposeArgs),
    /// Stationary patterns over a range of domain lengths, decomposed into modes.
    LengthSweep(LengthSweepArgs),
    /// Galerkin truncation at one domain length.
    Galerkin(GalerkinArgs),
    /// Galerkin continuation in one parameter.
    GalerkinSweep(GalerkinSweepArgs),
    /// Data behind a figure or table.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    /// Model variant M1..M9 [default: M3].
    #[arg(long)]
    pub variant: Option<Variant>,
    /// Cell to chemical diffusion ratio [default: 1].
    #[arg(long = "D")]
    pub d: Option<f64>,
    /// Chemotactic sensitivity [default: 1.9].
    #[arg(long, allow_hyphen_values = true)]
    pub chi0: Option<f64>,
    /// Reproduction rate [default: 0.1].
    #[arg(long)]
    pub r: Option<f64>,
    /// Receptor saturation constant (M7, M8).
    #[arg(long)]
    pub nu: Option<f64>,
    /// Density offset (M9).
    #[arg(long)]
    pub nu1: Option<f64>,
    /// Concentration offset (M9).
    #[arg(long)]
    pub nu2: Option<f64>,
    /// Mean cell density (variants without growth).
    #[arg(long)]
    pub n0: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutArgs {
    /// CSV destination [default: standard output].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Manifest destination [default: next to --out as <stem>.manifest.json].
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct StationaryArgs {
    /// Stationarity threshold on max |dn/dt| [default: 1e-7].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Give up on stationarity at this time [default: 5000].
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Interval between stationarity checks [default: 1].
    #[arg(long)]
    pub interval: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct StabilitySweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Parameter to vary: D, chi0, r, nu, nu1, nu2, n0.
    #[arg(long)]
    pub vary: Option<ModelParam>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    /// Number of evenly spaced values, ends included [default: 101].
    #[arg(long)]
    pub points: Option<usize>,
    /// Instead of the stability table, solve R_T = 1 for this parameter at each value.
    #[arg(long)]
    pub boundary: Option<ModelParam>,
    /// Lower end of the bracket searched for the boundary [default: 1e-6].
    #[arg(long = "search-from", allow_hyphen_values = true)]
    pub search_from: Option<f64>,
    /// Upper end of the bracket searched for the boundary [default: 50].
    #[arg(long = "search-to")]
    pub search_to: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Domain length [default: 50].
    #[arg(long)]
    pub length: Option<f64>,
    /// Number of cells; overrides --dx.
    #[arg(long)]
    pub nx: Option<usize>,
    /// Target cell width [default: 0.05].
    #[arg(long)]
    pub dx: Option<f64>,
    /// explicit or semi-implicit [default: explicit].
    #[arg(long)]
    pub scheme: Option<SchemeArg>,
    /// Time step [default: the scheme's stable step].
    #[arg(long)]
    pub dt: Option<f64>,
    /// front-seed, stimulus or homogeneous [default: stimulus].
    #[arg(long)]
    pub ic: Option<IcKind>,
    /// Background density for stimulus/homogeneous [default: 1].
    #[arg(long = "ic-n")]
    pub ic_n: Option<f64>,
    /// Background concentration for stimulus/homogeneous [default: 1].
    #[arg(long = "ic-c")]
    pub ic_c: Option<f64>,
    /// Density inside the stimulus window [default: 1.1].
    #[arg(long)]
    pub stimulus: Option<f64>,
    /// Centre of the width-2 stimulus window [default: L/2].
    #[arg(long = "stimulus-center")]
    pub stimulus_center: Option<f64>,
    /// Final time [default: 200].
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// Run until stationary instead of to --t-end.
    #[arg(long = "to-stationary")]
    pub to_stationary: bool,
    #[command(flatten)]
    pub stationary: StationaryArgs,
    /// Extra snapshot times, comma separated.
    #[arg(long)]
    pub snapshots: Option<FloatList>,
    /// Output directory [default: .].
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
    /// Snapshot file prefix [default: snapshot].
    #[arg(long)]
    pub prefix: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct FrontSpeedArgs {
    /// Snapshot CSVs (columns x,n[,c]) named `<anything>_t<time>.csv`.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Density level that tracks the front [default: 0.5].
    #[arg(long)]
    pub level: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct DecomposeArgs {
    /// Profile CSV with columns x,n and optionally c.
    #[arg(long)]
    pub input: PathBuf,
    /// Highest mode [default: 10].
    #[arg(long)]
    pub modes: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct LengthSweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// First domain length [default: 1].
    #[arg(long)]
    pub from: Option<f64>,
    /// Last domain length [default: 25].
    #[arg(long)]
    pub to: Option<f64>,
    /// Length increment [default: 0.25].
    #[arg(long)]
    pub step: Option<f64>,
    /// Highest mode [default: 10].
    #[arg(long)]
    pub modes: Option<usize>,
    /// Mode whose bump defines the characteristic length [default: 1].
    #[arg(long = "summary-mode")]
    pub summary_mode: Option<usize>,
    /// Target cell width [default: 0.05].
    #[arg(long)]
    pub dx: Option<f64>,
    /// explicit or semi-implicit [default: semi-implicit].
    #[arg(long)]
    pub scheme: Option<SchemeArg>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[command(flatten)]
    pub stationary: StationaryArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct NewtonArgs {
    /// Newton residual tolerance [default: 1e-12].
    #[arg(long = "newton-tol")]
    pub newton_tol: Option<f64>,
    /// Newton iteration cap [default: 100].
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GalerkinArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Truncation order M [default: 3].
    #[arg(long)]
    pub modes: Option<usize>,
    /// Domain length [default: 5.5].
    #[arg(long)]
    pub length: Option<f64>,
    /// Base wavenumber; overrides --length.
    #[arg(long)]
    pub k: Option<f64>,
    /// One row per order 1..=M.
    #[arg(long)]
    pub ladder: bool,
    /// Report the characteristic length and amplitude maximising the pattern coefficient.
    #[arg(long)]
    pub predict: bool,
    /// Convention for --predict: first (alpha_1, one half-spike) or second (alpha_2, two) [default: first].
    #[arg(long)]
    pub maximise: Option<Maximise>,
    #[command(flatten)]
    pub newton: NewtonArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GalerkinSweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Parameter to follow: L, k, D, chi0, r.
    #[arg(long)]
    pub vary: Option<GalerkinParam>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    /// Number of evenly spaced values, ends included [default: 41].
    #[arg(long)]
    pub points: Option<usize>,
    /// Truncation order M [default: 3].
    #[arg(long)]
    pub modes: Option<usize>,
    /// Domain length when another parameter varies [default: 5.5].
    #[arg(long)]
    pub length: Option<f64>,
    #[command(flatten)]
    pub newton: NewtonArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ReproduceArgs {
    /// fig1..fig7, table2 or all.
    #[arg(long)]
    pub target: Option<Target>,
    /// Output directory [default: reproduce].
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
}

fn run(cli: Cli, argv: Vec<String>) -> Result<(), CliError> {
    let mut res = Resolver::load(cli.config.as_deref())?;
    let jobs = res.optional("jobs", cli.jobs)?;
    if let Some(jobs) = jobs {
        config::ensure(jobs >= 1, "jobs", "at least 1")?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    }
    let name = match &cli.command {
        Command::Stability(_) => "stability",
        Command::StabilitySweep(_) => "stability-sweep",
        Command::Simulate(_) => "simulate",
        Command::FrontSpeed(_) => "front-speed",
        Command::Decompose(_) => "decompose",
        Command::LengthSweep(_) => "length-sweep",
        Command::Galerkin(_) => "galerkin",
        Command::GalerkinSweep(_) => "galerkin-sweep",
        Command::Reproduce(_) => "reproduce",
    };
    let mut session = Session::new(name, argv, res);
    let result = match &cli.command {
        Command::Stability(a) => commands::stability(&mut session, a),
        Command::StabilitySweep(a) => commands::stability_sweep(&mut session, a),
        Command::Simulate(a) => commands::simulate(&mut session, a),
        Command::FrontSpeed(a) => commands::front_speed(&mut session, a),
        Command::Decompose(a) => commands::decompose(&mut session, a),
        Command::LengthSweep(a) => commands::length_sweep(&mut session, a),
        Command::Galerkin(a) => commands::galerkin(&mut session, a),
        Command::GalerkinSweep(a) => commands::galerkin_sweep(&mut session, a),
        Command::Reproduce(a) => reproduce::run(&mut session, a),
    };
    session.finish(&result)?;
    result
}

fn main() -> ExitCode {
    // the program path varies between installs; the manifest keeps only the arguments
    let argv: Vec<String> = std::iter::once("ks-turing".to_string()).chain(std::env::args().skip(1)).collect();
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("ks-turing: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
