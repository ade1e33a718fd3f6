//! `rlab`: command-line harness over the resilience laboratory.
//!
//! Exit codes: 0 on success, 2 on validation errors (bad arguments, bad
//! config, inputs outside an operation's domain), 3 on runtime failures
//! (exhausted generators, i/o, non-convergence).

mod commands;
mod config;
mod experiment;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rlab_core::error::Error;

/// Failure classified for the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// The request itself is malformed or out of domain (exit 2).
    Validation(String),
    /// The request was sound but execution failed (exit 3).
    Runtime(String),
}

pub type CmdResult<T> = Result<T, Failure>;

impl Failure {
    pub fn validation(msg: impl Into<String>) -> Self {
        Failure::Validation(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        Failure::Runtime(msg.into())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::GenerationExhausted { .. } | Error::NoConvergence { .. } => {
                Failure::Runtime(e.to_string())
            }
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("i/o error: {e}"))
    }
}

#[derive(Parser)]
#[command(name = "rlab", version, about = "Graph resilience laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a graph and write it as an edge-list file.
    Generate(GenerateArgs),
    /// Extreme adjacency eigenvalues of a regular graph.
    Spectral(SpectralArgs),
    /// Run a bounded-degree deletion attack and write the deleted subgraph.
    Attack(AttackArgs),
    /// Build a deletion-tolerance certificate for a property.
    Certify(CertifyArgs),
    /// Decide or search Hamiltonicity.
    Ham(HamArgs),
    /// Enumerate boosters exactly or with rotation witnesses.
    Boosters(BoostersArgs),
    /// Two-sided Hamiltonicity resilience estimate over sampled hosts.
    Resilience(ResilienceArgs),
    /// Play one Maker-Breaker Hamiltonicity game and record the transcript.
    Game(GameArgs),
    /// Run a configured experiment sweep and persist a run record.
    Experiment(ExperimentArgs),
    /// Summarize a run record into tables and plot-ready CSV.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Regular,
    Degseq,
    Union,
    TwoHam,
    Gnp,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub d1: Option<usize>,
    #[arg(long)]
    pub d2: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    /// File of whitespace-separated degrees (degseq model).
    #[arg(long)]
    pub degrees: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SpectralArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Eigensolver tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AttackKind {
    Trivial,
    Partition,
    Matching,
}

#[derive(Args)]
pub struct AttackArgs {
    #[arg(long, value_enum)]
    pub kind: AttackKind,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where to write the deleted subgraph.
    #[arg(long = "out-h")]
    pub out_h: PathBuf,
    /// Connectivity target for the trivial attack.
    #[arg(long)]
    pub target: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CertKindArg {
    Econn,
    Vconn,
    Pm,
}

#[derive(Args)]
pub struct CertifyArgs {
    #[arg(long, value_enum)]
    pub kind: CertKindArg,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Caller-supplied eigenvalue bound.
    #[arg(long, conflicts_with = "compute_lambda")]
    pub lambda: Option<f64>,
    /// Compute the eigenvalue bound with the built-in solver.
    #[arg(long)]
    pub compute_lambda: bool,
    /// Slack parameter of the vertex-connectivity budget.
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum HamMode {
    Exact,
    Heuristic,
}

#[derive(Args)]
pub struct HamArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: HamMode,
    /// Rotation-extension restarts in heuristic mode.
    #[arg(long, default_value_t = rlab_core::resilience::HAM_SEARCH_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BoosterModeArg {
    Exact,
    Witnessed,
}

#[derive(Args)]
pub struct BoostersArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: BoosterModeArg,
    /// Search restarts in witnessed mode.
    #[arg(long, default_value_t = 8)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rotate from both reachable ends in witnessed mode.
    #[arg(long)]
    pub deep: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum PropertyArg {
    Ham,
}

#[derive(Args)]
pub struct ResilienceArgs {
    #[arg(long, value_enum)]
    pub property: PropertyArg,
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub d1: Option<usize>,
    #[arg(long)]
    pub d2: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub degrees: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum MakerArg {
    /// Staged plan: tree pairing, then degree defense, then boosters.
    Staged,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BreakerArg {
    Random,
    VertexKiller,
    BoosterBlocker,
    CutBuilder,
}

#[derive(Args)]
pub struct GameArgs {
    /// Board edge-list file (requires --decomp).
    #[arg(long, requires = "decomp")]
    pub board: Option<PathBuf>,
    /// Decomposition files: cycle1,cycle2,degree-part,booster-part.
    #[arg(long, value_delimiter = ',')]
    pub decomp: Vec<PathBuf>,
    /// Sample a structured board instead: N,D12,D2.
    #[arg(long, conflicts_with = "board")]
    pub sample_board: Option<String>,
    /// Write the board and its four parts under this path prefix.
    #[arg(long)]
    pub emit_board: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "staged")]
    pub maker: MakerArg,
    #[arg(long, value_enum)]
    pub breaker: BreakerArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep playing until the whole board is claimed.
    #[arg(long)]
    pub full: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ExperimentArgs {
    /// Experiment config: `key = value` sections or JSON.
    #[arg(long)]
    pub config: PathBuf,
    /// Override the config's output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the config's worker count.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Args)]
pub struct ReportArgs {
    /// Run record JSON produced by `experiment`.
    #[arg(long)]
    pub run: PathBuf,
    /// Directory for the summary files (default: next to the run record).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn dispatch(cli: Cli) -> CmdResult<()> {
    match cli.cmd {
        Cmd::Generate(a) => commands::generate(a),
        Cmd::Spectral(a) => commands::spectral(a),
        Cmd::Attack(a) => commands::attack(a),
        Cmd::Certify(a) => commands::certify(a),
        Cmd::Ham(a) => commands::ham(a),
        Cmd::Boosters(a) => commands::boosters(a),
        Cmd::Resilience(a) => commands::resilience(a),
        Cmd::Game(a) => commands::game(a),
        Cmd::Experiment(a) => commands::experiment(a),
        Cmd::Report(a) => commands::report(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
