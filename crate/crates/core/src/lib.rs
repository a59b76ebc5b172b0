//! Bayesian weight-of-evidence analysis for win streaks in rated
//! competition.
//!
//! Given a streak of `k` wins in `m` rated games, this crate answers the
//! question a bare "that streak is one in a thousand!" claim dodges: how
//! probable is foul play *given* the streak, once you account for the
//! rating gap and a prior over how common cheaters are. The distinction
//! matters because `P(evidence | innocent)` and `P(innocent | evidence)`
//! routinely differ by orders of magnitude (the prosecutor's fallacy).
//!
//! The pieces:
//!
//! - [`elo`]: rating gaps to win odds/probabilities and back.
//! - [`streak`]: exact streak likelihoods (binomial, Poisson-binomial),
//!   longest-run recurrences, and seeded Monte Carlo scan estimators.
//! - [`bayes`]: prior odds x likelihood to posterior odds, with prior
//!   sensitivity sweeps.
//! - [`ingest`]: CSV game histories, per-game win probabilities, and
//!   streak-window location.

pub mod bayes;
pub mod elo;
mod error;
pub mod ingest;
pub mod streak;

pub use bayes::{
    end_to_end_case, posterior, sensitivity_sweep, CaseReport, EvidenceReport, PriorSpec,
    RatingInput, SweepRow,
};
pub use elo::{implied_performance, win_odds, win_probability, EloParams, RatingDelta};
pub use error::{Error, Result};
pub use ingest::{
    find_streaks, load_history, load_history_from_reader, per_game_probabilities, DrawPolicy,
    GameHistory, GameRecord, GameResult, IngestConfig, StreakWindow,
};
pub use streak::{
    binomial_pmf, binomial_streak_prob, binomial_tail_prob, jensen_ratio, longest_run_prob,
    longest_win_run, mean_jensen_ratio, poisson_binomial_pmf, poisson_binomial_prob,
    scan_streak_prob_mc, simulate_history, simulate_summary, JensenExperiment, McEstimate,
    SimModel, SimulationSummary, StreakObservation, TiltModel, WinModel,
};
