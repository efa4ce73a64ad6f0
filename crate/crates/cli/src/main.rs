//! `d2d`: command-line driver for channel allocation, power-control learning,
//! strategy comparison and game analysis.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use d2d_core::allocation::Criterion;

#[derive(Parser)]
#[command(name = "d2d", version, about = "Channel allocation and power control for D2D underlay networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stage-one channel allocation; writes allocation.csv and summary.json.
    Allocate(AllocateArgs),
    /// Q-learning better-reply run on one game; writes trace.csv and summary.json.
    Learn(LearnArgs),
    /// Pipeline against the exhaustive and random baselines; writes
    /// comparison.csv, plot_data.csv and manifest.json.
    Compare(CompareArgs),
    /// Equilibria, price of stability and potential checks; writes analysis.json.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct Common {
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Overrides the scenario seed (and seeds the learning runs).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct AllocateArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, default_value = "sum")]
    criterion: Criterion,
    #[command(flatten)]
    common: Common,
}

/// Either a payoff table or a scenario channel.
#[derive(Args)]
struct GameSource {
    /// Payoff table CSV (`action_1..action_K,reward_1..reward_K`).
    #[arg(long, conflicts_with = "scenario")]
    payoffs: Option<PathBuf>,
    #[arg(long, requires = "channel")]
    scenario: Option<PathBuf>,
    /// Channel (1-based) whose cluster game is used.
    #[arg(long)]
    channel: Option<usize>,
    #[arg(long, default_value = "sum")]
    criterion: Criterion,
}

#[derive(Args)]
struct LearnerFlags {
    #[arg(long, default_value_t = 1.0)]
    c_lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    c_epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    rho_lambda: f64,
    #[arg(long, default_value_t = 0.5)]
    zeta: f64,
    #[arg(long, default_value_t = 12)]
    memory: usize,
    #[arg(long, default_value_t = 2000)]
    horizon: usize,
    /// Constant exploration probability instead of the decaying schedule.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Half-width of the uniform reward noise.
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
}

#[derive(Args)]
struct LearnArgs {
    #[command(flatten)]
    source: GameSource,
    #[command(flatten)]
    learner: LearnerFlags,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, default_value = "sum")]
    criterion: Criterion,
    #[arg(long, default_value_t = 10)]
    replications: usize,
    /// Random allocations averaged per replication (defaults to the horizon).
    #[arg(long)]
    random_draws: Option<usize>,
    #[command(flatten)]
    learner: LearnerFlags,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: GameSource,
    /// Price used for the logarithmic potential of a payoff table.
    #[arg(long, default_value_t = 0.1)]
    price: f64,
    #[command(flatten)]
    common: Common,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Allocate(a) => commands::allocate(a),
        Command::Learn(a) => commands::learn(a),
        Command::Compare(a) => commands::compare(a),
        Command::Analyze(a) => commands::analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_infeasibility() { 2 } else { 1 })
        }
    }
}
