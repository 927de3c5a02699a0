//! `flockcd` command-line driver.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags or invalid
//! settings), 2 for data errors (unreadable, malformed or unsuitable input).

mod commands;
mod reproduce;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "flockcd",
    version,
    about = "Community detection by alignment dynamics and iterative edge removal"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a planted-partition network and its ground truth.
    Generate(GenerateArgs),
    /// Run the detector on a network.
    Detect(DetectArgs),
    /// Run a modularity baseline (greedy agglomeration or Louvain).
    Baseline(BaselineArgs),
    /// Compare two partitions, optionally scoring the first on a graph.
    Evaluate(EvaluateArgs),
    /// Run the detector over a grid of settings and tabulate the best results.
    Sweep(SweepArgs),
    /// Regenerate one of the benchmark CSV bundles.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Community sizes, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "200,200,200,200")]
    sizes: Vec<usize>,
    /// Desired mean degree (even).
    #[arg(long, default_value_t = 10)]
    kdes: usize,
    /// Probability that a drawn target lies in the vertex's own community.
    #[arg(long, default_value_t = 0.66)]
    pin: f64,
    #[arg(long)]
    seed: u64,
    /// Output prefix; writes PREFIX.edges and PREFIX.truth.
    #[arg(long)]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    /// Pick from the file extension (.gml, .dat, anything else = edges).
    Auto,
    /// Zero-indexed edge list.
    Edges,
    /// One-indexed edge list.
    Edges1,
    Gml,
    /// LFR network.dat.
    Lfr,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Network file.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum StopArg {
    Exhaust,
    Patience(usize),
}

impl fmt::Display for StopArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopArg::Exhaust => write!(f, "exhaust"),
            StopArg::Patience(w) => write!(f, "patience:{w}"),
        }
    }
}

fn parse_stop(s: &str) -> Result<StopArg, String> {
    if s == "exhaust" {
        return Ok(StopArg::Exhaust);
    }
    s.strip_prefix("patience:")
        .and_then(|w| w.parse().ok())
        .map(StopArg::Patience)
        .ok_or_else(|| format!("expected `exhaust` or `patience:W`, got {s:?}"))
}

#[derive(Args, Debug, Clone)]
struct DynamicsArgs {
    /// Coupling strength, in (0, 0.5).
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Velocity dimension.
    #[arg(long, default_value_t = 3)]
    dims: usize,
    /// Maximum number of steps per run.
    #[arg(long, default_value_t = 100)]
    tmax: usize,
    /// Stop a run once no direction component moves more than this (0 = off).
    #[arg(long, default_value_t = 0.0)]
    conv_tol: f64,
    /// Independent runs per round.
    #[arg(long, default_value_t = 10)]
    runs: usize,
    /// Round loop stop rule: `exhaust` or `patience:W`.
    #[arg(long, value_parser = parse_stop, default_value = "patience:5")]
    stop: StopArg,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct RemovalArgs {
    /// Edges removed per round.
    #[arg(long)]
    remove_count: Option<usize>,
    /// Fraction of the remaining edges removed per round.
    #[arg(long)]
    remove_frac: Option<f64>,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    dynamics: DynamicsArgs,
    #[command(flatten)]
    removal: RemovalArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ground-truth community file; adds ARI and NMI to the output.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Per-round trace CSV.
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Best partition, as one-indexed `node community` lines.
    #[arg(long)]
    partition_out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Algo {
    Cfg,
    Louvain,
}

#[derive(Args, Debug)]
struct BaselineArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    algo: Algo,
    /// Seed for Louvain's visiting order.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    partition_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Partition to score (community file).
    a: PathBuf,
    /// Reference partition (community file).
    b: PathBuf,
    /// Network on which to compute the modularity of A.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Coupling strengths to try.
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    alphas: Vec<f64>,
    /// Step limits to try.
    #[arg(long, value_delimiter = ',', default_value = "30,40,50,60,70")]
    tmax: Vec<usize>,
    /// Removal fractions to try.
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with = "remove_counts",
        default_value = "0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.1"
    )]
    remove_fracs: Vec<f64>,
    /// Removal counts to try instead of fractions.
    #[arg(long, value_delimiter = ',')]
    remove_counts: Option<Vec<usize>>,
    #[arg(long, default_value_t = 3)]
    dims: usize,
    #[arg(long, default_value_t = 0.0)]
    conv_tol: f64,
    #[arg(long, default_value_t = 30)]
    runs: usize,
    #[arg(long, value_parser = parse_stop, default_value = "exhaust")]
    stop: StopArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    /// Output CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Bundle {
    /// Modularity per round on one planted network, with baseline levels.
    Fig2,
    /// Intra/inter misalignment over time on a planted network.
    Fig4,
    /// 1, 20 and 80 edges per round over many planted networks.
    Fig5,
    /// Misalignment over time on a big and a dense network.
    Fig6,
    /// Unbalanced communities (800/400/200/100).
    Fig7,
    /// NMI against the LFR mixing parameter.
    Fig8,
    /// Best modularity on the real-world datasets.
    Table1,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    #[arg(value_enum)]
    name: Bundle,
    #[arg(long)]
    seed: u64,
    /// Number of networks (default depends on the bundle).
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Directory holding karate.gml, dolphins.gml, football.gml, polbooks.gml.
    #[arg(long, default_value = "data")]
    data_dir: PathBuf,
    /// Directory holding mu_<μ>/<trial>/{network,community}.dat.
    #[arg(long, default_value = "data/lfr")]
    lfr_dir: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    err: anyhow::Error,
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(err: impl Into<anyhow::Error>) -> CliError {
    CliError {
        code: 1,
        err: err.into(),
    }
}

pub fn data(err: impl Into<anyhow::Error>) -> CliError {
    CliError {
        code: 2,
        err: err.into(),
    }
}

/// Attaches an exit code to any fallible result.
pub trait Classify<T> {
    fn or_usage(self) -> CliResult<T>;
    fn or_data(self) -> CliResult<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn or_usage(self) -> CliResult<T> {
        self.map_err(usage)
    }

    fn or_data(self) -> CliResult<T> {
        self.map_err(data)
    }
}

fn init_threads(jobs: Option<usize>) -> CliResult<()> {
    let Some(jobs) = jobs else { return Ok(()) };
    if jobs == 0 {
        return Err(usage(anyhow::anyhow!("--jobs must be at least 1")));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .or_usage()?;
    #[cfg(not(feature = "parallel"))]
    log::warn!("built without the `parallel` feature; --jobs {jobs} has no effect");
    Ok(())
}

fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Generate(a) => commands::generate(a),
        Command::Detect(a) => {
            init_threads(a.dynamics.jobs)?;
            commands::detect(a)
        }
        Command::Baseline(a) => commands::baseline(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Sweep(a) => {
            init_threads(a.jobs)?;
            commands::sweep(a)
        }
        Command::Reproduce(a) => {
            init_threads(a.jobs)?;
            reproduce::run(a)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError { code, err }) => {
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}
