//! Command-line frontend for the ring clique-routing solvers.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage or precondition error,
//! 3 verification mismatch.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mcrpc::Error;

#[derive(Parser)]
#[command(
    name = "mcrpc",
    version,
    about = "Route weighted demands around a ring so that the heaviest set of \
             pairwise arc-sharing routes is as light as possible"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance with one of the algorithms.
    Solve(SolveArgs),
    /// Recompute the clique value of a routing file against an instance.
    Verify(VerifyArgs),
    /// Generate instance files.
    Generate(GenerateArgs),
    /// Run a seeded batch and compare algorithm values against the optimum.
    Compare(BatchArgs),
    /// Run a seeded batch and report wall-clock time per algorithm.
    Bench(BatchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    /// Exhaustive routing enumeration (up to 25 demands).
    Exact,
    /// Shortest-side routing; within twice the optimum.
    Approx2,
    /// Cutting-plane relaxation with rounding; within 3/2 of the optimum.
    Lp32,
    /// Fixed-parameter search; exact for uniform weights.
    Fpt,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Exact => "exact",
            Algo::Approx2 => "approx2",
            Algo::Lp32 => "lp32",
            Algo::Fpt => "fpt",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Algorithm to run.
    #[arg(long, value_enum)]
    algo: Algo,
    /// Instance file path, or a fixture name (fig2, fig3, fig5).
    #[arg(long)]
    input: String,
    /// Write the resulting routing file here.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Cut ceiling for the lp32 relaxation.
    #[arg(long, default_value_t = 10_000)]
    cut_limit: usize,
    /// Include generated lp32 cuts in the report.
    #[arg(long)]
    dump_cuts: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file path, or a fixture name (fig2, fig3, fig5).
    #[arg(long)]
    input: String,
    /// Routing file produced by `solve --output`.
    #[arg(long)]
    routing: PathBuf,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    kind: GenerateKind,
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Ring encoding of a partition multiset: poles plus crossing chords.
    Partition {
        /// Comma-separated positive integers, e.g. 1,2,3,4.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Seeded random demands.
    Random {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        demands: usize,
        #[arg(long, default_value_t = 10)]
        max_weight: u64,
        /// All weights 1.
        #[arg(long)]
        uniform: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// One of the bundled example instances.
    Fixture {
        /// fig2, fig3, or fig5.
        #[arg(long)]
        name: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BatchArgs {
    /// Algorithms to run.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_values_t = [Algo::Exact, Algo::Approx2, Algo::Lp32, Algo::Fpt]
    )]
    algos: Vec<Algo>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Ring size per trial.
    #[arg(long, default_value_t = 10)]
    n: u32,
    /// Demand count per trial.
    #[arg(long, default_value_t = 8)]
    demands: usize,
    #[arg(long, default_value_t = 10)]
    max_weight: u64,
    /// All weights 1 (required for the fpt column).
    #[arg(long)]
    uniform: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

fn run(cli: &Cli) -> mcrpc::Result<i32> {
    match &cli.command {
        Command::Solve(args) => commands::cmd_solve(args),
        Command::Verify(args) => commands::cmd_verify(args),
        Command::Generate(args) => match &args.kind {
            GenerateKind::Partition { set, output } => {
                commands::cmd_generate_partition(set, output.as_ref())
            }
            GenerateKind::Random {
                n,
                demands,
                max_weight,
                uniform,
                seed,
                output,
            } => commands::cmd_generate_random(
                *n,
                *demands,
                *max_weight,
                *uniform,
                *seed,
                output.as_ref(),
            ),
            GenerateKind::Fixture { name, output } => {
                commands::cmd_generate_fixture(name, output.as_ref())
            }
        },
        Command::Compare(args) => commands::cmd_compare(args),
        Command::Bench(args) => commands::cmd_bench(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Internal(_) | Error::IterationLimit { .. } => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
