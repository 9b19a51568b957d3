//! `fusion-frame`: generate, inspect, tensor, dualize, reconstruct and verify
//! fusion systems stored as `fusion-frame/1` JSON files.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "fusion-frame",
    version,
    about = "Fusion frames on C^n and C^m ⊗ C^n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a seeded random system.
    Generate(GenerateArgs),
    /// Report frame status, optimal bounds and operator norms.
    Check(CheckArgs),
    /// Build the tensor product of two systems.
    Tensor(TensorArgs),
    /// Compute the canonical dual and its dual-identity residual.
    Dual(DualArgs),
    /// Run the randomised verification campaign.
    Verify(VerifyArgs),
    /// Reconstruct a vector through the canonical or a supplied dual.
    Reconstruct(ReconstructArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub subspaces: usize,
    #[arg(long)]
    pub max_subdim: usize,
    #[arg(long)]
    pub seed: u64,
    /// Weight range as LO:HI.
    #[arg(long, value_parser = parse_weight_range, default_value = "1:1")]
    pub weights: (f64, f64),
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct TensorArgs {
    #[arg(long)]
    pub left: PathBuf,
    #[arg(long)]
    pub right: PathBuf,
    /// Where to write the tensor system; without it the system goes to
    /// stdout and the report to stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DualArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Dualize the tensor product of `--in` with this system instead.
    #[arg(long)]
    pub right: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the dual system itself on stdout (report moves to stderr).
    #[arg(long)]
    pub emit_basis: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated check ids, or ALL.
    #[arg(long, default_value = "ALL")]
    pub theorems: String,
    #[arg(long, default_value_t = 25)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// LO-HI for both factors, or LO-HI,LO-HI for H and K.
    #[arg(long, default_value = "2-6")]
    pub dims: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// JSON array of numbers or [re, im] pairs.
    #[arg(long)]
    pub vector: String,
    /// Index-aligned alternative dual to reconstruct with.
    #[arg(long)]
    pub dual: Option<PathBuf>,
}

fn parse_weight_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad weight {x:?}: {e}"))
    };
    Ok((parse(lo)?, parse(hi)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<(), CliError> = match cli.command {
        Command::Generate(a) => commands::generate(&a),
        Command::Check(a) => commands::check(&a),
        Command::Tensor(a) => commands::tensor(&a),
        Command::Dual(a) => commands::dual(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Reconstruct(a) => commands::reconstruct(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fusion-frame: {e}");
            e.exit_code()
        }
    }
}
