//! benchgate: evaluate scored predictions, compare methods, plan
//! cross-validation splits, and run seeded simulation experiments.

mod commands;
mod error;
mod io;
mod report;

use clap::{Parser, Subcommand};

use commands::{compare, eval, simulate, split, wins};
use error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "benchgate",
    version,
    about = "Binary-classifier benchmark evaluation: metrics, uncertainty, paired tests, CV split plans, and Monte-Carlo experiments",
    after_help = "Exit codes: 0 success, 2 parse/validation error, 3 statistical no-decision, 4 non-convergence.\n\
                  Seeds resolve from --seed, then BENCHGATE_SEED, then a generated value announced on stderr."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-(assay, method, fold) metrics with confidence intervals and
    /// per-assay fold summaries from a predictions CSV
    Eval(eval::EvalArgs),
    /// Paired sign or Wilcoxon comparison of two methods from a
    /// fold-metrics CSV
    Compare(compare::CompareArgs),
    /// Best-method win table across all complete fold units
    Wins(wins::WinsArgs),
    /// Seeded Monte-Carlo experiments
    #[command(subcommand)]
    Simulate(simulate::SimulateCmd),
    /// Emit a deterministic nested n x k cross-validation plan
    Split(split::SplitArgs),
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Eval(args) => eval::run(args),
        Command::Compare(args) => compare::run(args),
        Command::Wins(args) => wins::run(args),
        Command::Simulate(cmd) => simulate::run(cmd),
        Command::Split(args) => split::run(args),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("benchgate: {e}");
        std::process::exit(e.exit_code());
    }
}
