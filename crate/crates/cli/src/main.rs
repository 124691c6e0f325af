//! `fciplus`: generate instances, run PC / FCI / FCI+, compare and benchmark runs.
//!
//! Exit codes: 0 success, 1 a difference or failed check, 2 bad input.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fciplus::harness::Algorithm;

#[derive(Parser)]
#[command(
    name = "fciplus",
    version,
    about = "Causal discovery with hidden separators: PC, FCI and FCI+"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random causal DAG with latent and selection variables.
    Generate(GenerateArgs),
    /// Run one algorithm on a ground-truth graph or on Gaussian data.
    Run(RunArgs),
    /// Diff the PAGs and query counts of two report files.
    Compare(CompareArgs),
    /// Run several algorithms over a directory of graphs.
    Bench(BenchArgs),
    /// Print a graph or a reported PAG in DOT format.
    Show(ShowArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Observed variables.
    #[arg(long, required_unless_present = "example")]
    n: Option<usize>,
    /// Write a hand-built example instead: figure4b, figure5 or figure6.
    #[arg(long, conflicts_with_all = ["n", "count"])]
    example: Option<String>,
    /// Maximum node degree of the projected MAG.
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    latents: usize,
    #[arg(long, default_value_t = 0)]
    selection: usize,
    /// Edge probability; defaults to 2.5 / (total variables).
    #[arg(long)]
    density: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hidden-separator gadgets to embed (each uses 5 observed and 2 latent variables).
    #[arg(long, default_value_t = 0)]
    planted: usize,
    #[arg(long, default_value_t = 10_000)]
    max_attempts: usize,
    /// Graphs to generate with consecutive seeds; with more than one, `--out` is a directory.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Output file (or directory); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_algorithm)]
    alg: Algorithm,
    /// Ground-truth DAG or MAG in graph JSON.
    #[arg(long, conflicts_with = "data", required_unless_present = "data")]
    graph: Option<PathBuf>,
    /// CSV of Gaussian samples with a header row.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Fisher z significance level for `--data`.
    #[arg(long, default_value_t = fciplus::oracle::DEFAULT_ALPHA, requires = "data")]
    alpha: f64,
    /// Cap on conditioning-set and base sizes.
    #[arg(long)]
    k: Option<usize>,
    /// Try the separating set restricted to Possible-D-SEP first.
    #[arg(long)]
    intersect_pdsep: bool,
    /// Seed recorded in the report.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the run report (JSON lines).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of graph JSON files.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm, default_value = "pc,fci,fciplus")]
    algs: Vec<Algorithm>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    intersect_pdsep: bool,
    /// Also run the invariant suite against each ground-truth DAG.
    #[arg(long)]
    check: bool,
    /// Write every run report (JSON lines).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ShowArgs {
    #[arg(long, conflicts_with = "report", required_unless_present = "report")]
    graph: Option<PathBuf>,
    /// Report file whose PAG to show.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Line of the report file, counting from 0.
    #[arg(long, default_value_t = 0, requires = "report")]
    index: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: fciplus::Error| e.to_string())
}

/// Result of a command that ran to completion.
pub enum Status {
    Ok,
    /// A diff was found or a check failed.
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Run(a) => commands::run(a),
        Command::Compare(a) => commands::compare(a),
        Command::Bench(a) => commands::bench(a),
        Command::Show(a) => commands::show(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
