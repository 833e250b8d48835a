//! `pach`: generate instances, select and verify certificates, and emit
//! bound tables and benchmark records.

mod commands;
mod record;
mod replicate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pach_core::constructions::ConstructionError;
use pach_core::selection::SelectionError;
use thiserror::Error;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  unreadable input or invalid arguments
  3  precondition violated (dimension, general position, containment, ...)
  4  budget or retry limit exhausted
  5  verification failed (containment fraction below 1)";

#[derive(Parser)]
#[command(name = "pach", version, about = "Rainbow simplex selection with exact certificates", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a colored point set.
    Gen(GenArgs),
    /// Run the selection pipeline and write a certificate.
    Select(SelectArgs),
    /// Check a certificate against its point set.
    Verify(VerifyArgs),
    /// Search for a point of large rainbow depth.
    Deep(DeepArgs),
    /// Estimate the solid angle of a simplex at a vertex, or its minimum.
    Angle(AngleArgs),
    /// Print the bound table as CSV.
    Bounds(BoundsArgs),
    /// Run select and verify over seeded instances and record the results.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    GridBall,
    UniformBall,
    Gaussian,
    Symmetric,
    MeasureFile,
}

#[derive(Args, Debug, serde::Serialize)]
pub struct GenArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, value_enum, default_value = "grid-ball")]
    pub shape: Shape,
    /// Cube side for grid-ball.
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Points per color for the random shapes.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// JSON array of weighted point measures, one per color.
    #[arg(long)]
    pub measure: Option<PathBuf>,
    /// Discretization spread for measure files, as a rational.
    #[arg(long, default_value = "1/100")]
    pub spread: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, serde::Serialize)]
pub struct SelectArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Skip the exhaustive containment check.
    #[arg(long)]
    pub no_verify: bool,
    /// Regularity parameter; defaults to 2^-d.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Largest witness search done exhaustively.
    #[arg(long, default_value_t = 1_000_000)]
    pub witness_budget: u128,
    #[arg(long, default_value_t = 2000)]
    pub witness_trials: usize,
    /// Cap on enumerated rainbow simplices.
    #[arg(long, default_value_t = 10_000_000)]
    pub rainbow_budget: u128,
    /// Also write an experiment record here.
    #[arg(long)]
    #[serde(skip)]
    pub record: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub cert: PathBuf,
    /// Enumerate every rainbow simplex instead of checking the arrangement.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DeepArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random simplex centroids tried besides the fixed strategies.
    #[arg(long, default_value_t = 200)]
    pub candidates: usize,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u128,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AngleArgs {
    /// Vertices as `x,y;x,y;...` (d+1 of them).
    #[arg(long)]
    pub vertices: String,
    /// Vertex index; the minimum over all vertices when omitted.
    #[arg(long)]
    pub vertex: Option<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// `a..b` (inclusive) or a comma list.
    #[arg(long, default_value = "1..6")]
    pub dims: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, serde::Serialize)]
pub struct BenchArgs {
    #[arg(long, default_value = "1..2")]
    pub dims: String,
    #[arg(long, value_enum, default_value = "uniform-ball")]
    pub shape: Shape,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 3)]
    pub runs: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Verification(_) => 5,
        }
    }
}

impl From<SelectionError> for CliError {
    fn from(e: SelectionError) -> Self {
        match e.root() {
            SelectionError::Budget { .. }
            | SelectionError::RetriesExhausted(_)
            | SelectionError::RegularityWitness { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Selection(s) => s.into(),
            ConstructionError::RetriesExhausted(_) => CliError::Budget(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Select(a) => commands::select(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Deep(a) => commands::deep(&a),
        Command::Angle(a) => commands::angle(&a),
        Command::Bounds(a) => commands::bounds(&a),
        Command::Bench(a) => record::bench(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
