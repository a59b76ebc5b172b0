//! Command-line surface for the streak weight-of-evidence library.
//!
//! One binary, five subcommands: `evidence`, `sweep`, `scan`, `simulate`
//! and `implied-perf`. Every printed number is produced by a library call;
//! this layer only parses flags, merges the optional config file, picks an
//! output format and rounds for display.
//!
//! Exit codes: 0 on success, 2 on input errors, 3 on internal numerical
//! failures. All stochastic commands require an explicit `--seed`; there
//! is deliberately no wall-clock default, so reruns reproduce.

mod commands;
mod config;
mod render;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "streakweight",
    version,
    about = "Bayesian weight of evidence for win streaks in rated competition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Posterior probability of foul play given an observed streak
    Evidence(EvidenceArgs),
    /// Sensitivity of the posterior to the prior odds N
    Sweep(SweepArgs),
    /// Streak windows in a game history, plus the history-wide scan probability
    Scan(ScanArgs),
    /// Seeded simulation experiments: win rates, longest runs, Jensen ratios
    Simulate(SimulateArgs),
    /// Performance rating implied by a score fraction
    ImpliedPerf(ImpliedPerfArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
    Svg,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
struct CommonArgs {
    /// Optional key=value config file; explicit flags win over it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format (not every format applies to every command)
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Print full-precision values instead of 4 significant digits
    #[arg(long)]
    precise: bool,
}

#[derive(Debug, Args)]
struct EvidenceArgs {
    /// Rating gap: player rating minus opponent average
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Player rating; with --history, also the default for rows with an
    /// empty player_rating column
    #[arg(long)]
    player_rating: Option<f64>,
    /// Average opponent rating (pair with --player-rating)
    #[arg(long)]
    opponent_avg: Option<f64>,
    /// Number of games in the streak
    #[arg(long)]
    games: Option<u32>,
    /// Number of wins in the streak
    #[arg(long)]
    wins: Option<u32>,
    /// CSV game history to analyze instead of explicit streak flags
    #[arg(long)]
    history: Option<PathBuf>,
    /// With --history: exact Poisson-binomial likelihood from per-game
    /// probabilities instead of the averaged-gap binomial
    #[arg(long)]
    per_game: bool,
    /// Prior odds N: assumed innocent players per cheater
    #[arg(long)]
    prior_n: Option<f64>,
    /// P(E|G): likelihood a cheater produces the evidence (default 1)
    #[arg(long)]
    p_guilt: Option<f64>,
    #[arg(long)]
    elo_base: Option<f64>,
    #[arg(long)]
    elo_scale: Option<f64>,
    /// Draw handling: no-win (default) or exclude
    #[arg(long)]
    draw_policy: Option<String>,
    /// Time-forfeit uplift u in [0, 1): q' = q + u(1 - q)
    #[arg(long)]
    uplift: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Streak likelihood p = P(E|I) to hold fixed across the sweep
    #[arg(long)]
    p: Option<f64>,
    /// First prior odds value
    #[arg(long)]
    n_from: Option<f64>,
    /// Last prior odds value (inclusive)
    #[arg(long)]
    n_to: Option<f64>,
    /// Grid step
    #[arg(long)]
    step: Option<f64>,
    /// Write the table or plot here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// CSV game history to scan
    #[arg(long)]
    history: PathBuf,
    /// Window length in games
    #[arg(long)]
    window: usize,
    /// Minimum wins inside a window for it to count
    #[arg(long)]
    min_wins: usize,
    /// Monte Carlo trials for the history-wide probability
    #[arg(long)]
    trials: Option<u64>,
    /// Monte Carlo seed (required; no wall-clock default)
    #[arg(long)]
    seed: Option<u64>,
    /// Override the per-game model with one uniform win probability
    #[arg(long)]
    q: Option<f64>,
    /// Tilt penalty in [0, 1): serial correlation through opponent tilt
    #[arg(long)]
    tilt: Option<f64>,
    /// Default player rating for rows with an empty player_rating column
    #[arg(long)]
    player_rating: Option<f64>,
    /// Draw handling: no-win (default) or exclude
    #[arg(long)]
    draw_policy: Option<String>,
    /// Time-forfeit uplift u in [0, 1): q' = q + u(1 - q)
    #[arg(long)]
    uplift: Option<f64>,
    #[arg(long)]
    elo_base: Option<f64>,
    #[arg(long)]
    elo_scale: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Games per replication
    #[arg(long)]
    games: Option<usize>,
    /// Number of replications
    #[arg(long)]
    reps: Option<u64>,
    /// Simulation seed (required; no wall-clock default)
    #[arg(long)]
    seed: Option<u64>,
    /// Jensen-ratio experiment: draw per-game probabilities from U(low, high)
    #[arg(long)]
    jensen: bool,
    /// Lower bound for --jensen draws
    #[arg(long)]
    low: Option<f64>,
    /// Upper bound for --jensen draws
    #[arg(long)]
    high: Option<f64>,
    /// Uniform win probability for game simulation
    #[arg(long)]
    q: Option<f64>,
    /// Tilt penalty in [0, 1); omit or pass 0 for independent games
    #[arg(long)]
    tilt: Option<f64>,
    /// Explicitly request independent games (conflicts with --tilt)
    #[arg(long, conflicts_with = "tilt")]
    uniform: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct ImpliedPerfArgs {
    /// Observed score fraction in (0, 1)
    #[arg(long)]
    score: Option<f64>,
    /// Alternative to --score: wins out of --games
    #[arg(long)]
    wins: Option<f64>,
    #[arg(long)]
    games: Option<f64>,
    /// Average opponent rating
    #[arg(long)]
    opponent_avg: Option<f64>,
    #[arg(long)]
    elo_base: Option<f64>,
    #[arg(long)]
    elo_scale: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Evidence(args) => commands::run_evidence(args),
        Command::Sweep(args) => commands::run_sweep(args),
        Command::Scan(args) => commands::run_scan(args),
        Command::Simulate(args) => commands::run_simulate(args),
        Command::ImpliedPerf(args) => commands::run_implied_perf(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: input: {}", single_line(&msg));
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: numeric: {}", single_line(&msg));
            ExitCode::from(3)
        }
    }
}

fn single_line(msg: &str) -> String {
    msg.replace('\n', "; ")
}
