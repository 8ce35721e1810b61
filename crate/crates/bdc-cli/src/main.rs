//! Command-line front end: simulate data, select hyperparameters, run
//! samplers, summarize traces, and score clusterings.

mod cfgfile;
mod commands;
mod manifest;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub enum CliError {
    /// bad or incompatible arguments (exit 2)
    Args(String),
    /// unreadable or invalid data (exit 3)
    Data(String),
    /// numeric failure at runtime (exit 4)
    Numeric(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Args(msg) => write!(f, "argument error: {msg}"),
            CliError::Data(msg) => write!(f, "data error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric error: {msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Args(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "bdc",
    version,
    about = "Bayesian distance clustering with medoid tessellation priors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic two-layer distance data
    Simulate(SimulateArgs),
    /// Select likelihood hyperparameters from a distance matrix
    Hyper(HyperArgs),
    /// Fit a clustering model and summarize its posterior
    Fit(FitArgs),
    /// Score estimated labels against reference labels
    Score(ScoreArgs),
    /// Recompute summaries from an existing trace file
    Summarize(SummarizeArgs),
}

#[derive(Args)]
pub struct SimulateArgs {
    /// number of objects
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// number of mixture components
    #[arg(long, default_value_t = 10)]
    clusters: usize,
    /// coordinate dimension (must be >= clusters)
    #[arg(long, default_value_t = 10)]
    dim: usize,
    /// within-cluster standard deviation
    #[arg(long, default_value_t = 0.1)]
    sigma: f64,
    /// fraction of objects sharing labels across layers
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// total Dirichlet mass over cluster weights
    #[arg(long, default_value_t = 10.0)]
    dirichlet_m: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
pub struct HyperArgs {
    /// distance matrix (CSV or binary)
    #[arg(long)]
    d1: PathBuf,
    #[arg(long, default_value_t = 2)]
    k_min: usize,
    /// upper end of the elbow sweep (default min(30, n/2))
    #[arg(long)]
    k_max: Option<usize>,
    /// configuration file to write
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    TessIndep,
    TessNested,
    TessJoint,
    PyIndep,
    PyJoint,
    Kmedoids,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LikelihoodArg {
    Quadratic,
    Linear,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Pam,
    Random,
}

#[derive(Args)]
pub struct FitArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// layer-1 distance matrix (CSV or binary)
    #[arg(long)]
    d1: PathBuf,
    /// layer-2 distance matrix (two-layer models)
    #[arg(long)]
    d2: Option<PathBuf>,
    #[arg(long, value_enum)]
    likelihood: Option<LikelihoodArg>,
    /// enable the repulsion term
    #[arg(long, conflicts_with = "no_repulsion")]
    repulsion: bool,
    /// disable the repulsion term
    #[arg(long)]
    no_repulsion: bool,
    /// likelihood configuration file (skips hyperparameter selection)
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    iters: u64,
    #[arg(long, default_value_t = 2_500)]
    burnin: u64,
    #[arg(long, default_value_t = 1)]
    thin: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// independent chains run concurrently (BDC_THREADS caps workers)
    #[arg(long, default_value_t = 1)]
    chains: u32,
    /// cluster count for kmedoids (default: elbow-selected)
    #[arg(long)]
    k: Option<usize>,
    /// truncated-geometric prior parameter on K
    #[arg(long, default_value_t = 0.1)]
    p_geom: f64,
    /// Pitman-Yor concentration
    #[arg(long, default_value_t = 1.0)]
    py_m: f64,
    /// Pitman-Yor discount
    #[arg(long, default_value_t = 0.01)]
    py_discount: f64,
    /// Beta prior shape a on the dependence parameter
    #[arg(long, default_value_t = 1.0)]
    alpha_a: f64,
    /// Beta prior shape b on the dependence parameter
    #[arg(long, default_value_t = 1.0)]
    alpha_b: f64,
    #[arg(long, value_enum, default_value_t = InitArg::Pam)]
    init: InitArg,
    /// medoid count for --init random
    #[arg(long)]
    init_k: Option<usize>,
    /// flag objects as singletons before fitting
    #[arg(long)]
    singleton_threshold: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    singleton_quantile: f64,
    /// output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
pub struct ScoreArgs {
    /// estimated labels (one 1-based label per line)
    #[arg(long, required_unless_present = "batch")]
    estimate: Option<PathBuf>,
    /// reference labels
    #[arg(long, required_unless_present = "batch")]
    truth: Option<PathBuf>,
    /// directory of replicate subdirectories to score in batch
    #[arg(long)]
    batch: Option<PathBuf>,
    /// estimate file name inside each replicate directory
    #[arg(long, default_value = "labels1.csv")]
    estimate_name: String,
    /// truth file name inside each replicate directory
    #[arg(long, default_value = "truth1.csv")]
    truth_name: String,
}

#[derive(Args)]
pub struct SummarizeArgs {
    /// trace file written by fit
    #[arg(long)]
    trace: PathBuf,
    /// output directory
    #[arg(long)]
    out: PathBuf,
    /// reference labels for layer 1 (adds ARI to the summary)
    #[arg(long)]
    truth1: Option<PathBuf>,
    /// reference labels for layer 2
    #[arg(long)]
    truth2: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate::run(&args),
        Command::Hyper(args) => commands::hyper::run(&args),
        Command::Fit(args) => commands::fit::run(&args),
        Command::Score(args) => commands::score::run(&args),
        Command::Summarize(args) => commands::summarize::run(&args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
