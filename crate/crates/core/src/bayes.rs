//! Posterior weight of evidence: combines prior population odds with the
//! streak likelihood.
//!
//! The headline distinction this module exists to keep straight: the
//! likelihood of the evidence under innocence, `P(E|I)`, is not the
//! probability of innocence given the evidence, `P(I|E)`. Conflating the
//! two is the prosecutor's fallacy, and [`EvidenceReport`] carries both as
//! separate fields so reports cannot blur them.

use serde::{Deserialize, Serialize};

use crate::elo::{win_odds, win_probability, EloParams, RatingDelta};
use crate::error::{Error, Result};
use crate::streak::{binomial_streak_prob, StreakObservation, WinModel};

/// Prior assumptions: how many innocent players there are per cheater, and
/// how likely a cheater would be to produce the observed evidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    n_innocent_per_cheater: f64,
    likelihood_under_guilt: f64,
}

impl PriorSpec {
    /// Prior odds of `n` innocents per cheater, with a cheater assumed
    /// certain to produce the evidence (`P(E|G) = 1`).
    pub fn new(n_innocent_per_cheater: f64) -> Result<Self> {
        Self::with_likelihood_under_guilt(n_innocent_per_cheater, 1.0)
    }

    /// As [`PriorSpec::new`] but with an explicit `P(E|G)` in (0, 1] for
    /// modeling imperfect cheaters.
    pub fn with_likelihood_under_guilt(
        n_innocent_per_cheater: f64,
        likelihood_under_guilt: f64,
    ) -> Result<Self> {
        if !n_innocent_per_cheater.is_finite() || n_innocent_per_cheater <= 0.0 {
            return Err(Error::invalid(format!(
                "prior N (innocents per cheater) must be finite and > 0, got \
                 {n_innocent_per_cheater}; a zero or negative prior leaves no room \
                 for evidence to move (Cromwell's rule)"
            )));
        }
        if !likelihood_under_guilt.is_finite()
            || likelihood_under_guilt <= 0.0
            || likelihood_under_guilt > 1.0
        {
            return Err(Error::invalid(format!(
                "likelihood under guilt must lie in (0, 1], got {likelihood_under_guilt}"
            )));
        }
        Ok(Self {
            n_innocent_per_cheater,
            likelihood_under_guilt,
        })
    }

    pub fn n_innocent_per_cheater(&self) -> f64 {
        self.n_innocent_per_cheater
    }

    pub fn likelihood_under_guilt(&self) -> f64 {
        self.likelihood_under_guilt
    }
}

/// The full posterior picture for one piece of streak evidence.
///
/// `likelihood_innocent` is `P(E|I)`; `p_innocent` is `P(I|E)`. They answer
/// different questions and routinely differ by orders of magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvidenceReport {
    /// `p = P(E|I)`: probability of the observed streak for an honest player.
    pub likelihood_innocent: f64,
    /// `p / P(E|G)`: how much more (or less) likely the evidence is under
    /// innocence than under guilt.
    pub bayes_factor: f64,
    /// Posterior odds of innocence over guilt, `N * bayes_factor`. This
    /// quantity is sometimes loosely labeled "odds of guilt" in informal
    /// write-ups; the name here matches the arithmetic: innocence on top.
    pub posterior_odds_innocence: f64,
    /// `P(G|E) = 1 / (1 + posterior odds of innocence)`.
    pub p_guilty: f64,
    /// `P(I|E) = odds / (1 + odds)`, the complement of `p_guilty`.
    pub p_innocent: f64,
}

/// One row of a prior-sensitivity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub prior_n: f64,
    pub p_innocent: f64,
}

/// Either an explicit rating gap or the pair of ratings it comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatingInput {
    Delta(f64),
    Ratings { player: f64, opponent_avg: f64 },
}

impl RatingInput {
    pub fn delta(&self) -> f64 {
        match *self {
            RatingInput::Delta(d) => d,
            RatingInput::Ratings {
                player,
                opponent_avg,
            } => player - opponent_avg,
        }
    }
}

/// A full case: rating gap, per-game win probability, and the posterior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub delta: f64,
    /// Single-game win odds `w` implied by the gap.
    pub win_odds: f64,
    /// Single-game win probability `q = w / (1 + w)`.
    pub win_probability: f64,
    pub games: u32,
    pub wins: u32,
    pub evidence: EvidenceReport,
}

/// Applies Bayes' rule in odds form to one likelihood value.
pub fn posterior(prior: &PriorSpec, likelihood_innocent: f64) -> Result<EvidenceReport> {
    if !likelihood_innocent.is_finite() || likelihood_innocent <= 0.0 || likelihood_innocent > 1.0 {
        return Err(Error::Domain(format!(
            "likelihood under innocence must lie in (0, 1], got {likelihood_innocent}; \
             an impossible observation cannot be conditioned on (Cromwell's rule)"
        )));
    }
    let bayes_factor = likelihood_innocent / prior.likelihood_under_guilt();
    let posterior_odds_innocence = prior.n_innocent_per_cheater() * bayes_factor;
    if !posterior_odds_innocence.is_finite() {
        return Err(Error::Numerical(format!(
            "posterior odds overflowed for N = {}, bayes factor = {bayes_factor}",
            prior.n_innocent_per_cheater()
        )));
    }
    // both probabilities come straight from the odds so neither loses
    // precision to cancellation when the odds are extreme
    let p_guilty = 1.0 / (1.0 + posterior_odds_innocence);
    let p_innocent = posterior_odds_innocence / (1.0 + posterior_odds_innocence);
    Ok(EvidenceReport {
        likelihood_innocent,
        bayes_factor,
        posterior_odds_innocence,
        p_guilty,
        p_innocent,
    })
}

/// Evaluates the posterior probability of innocence across a grid of prior
/// odds values, for studying how sensitive the verdict is to the prior.
pub fn sensitivity_sweep(likelihood_innocent: f64, n_grid: &[f64]) -> Result<Vec<SweepRow>> {
    if n_grid.is_empty() {
        return Err(Error::invalid(
            "sensitivity sweep needs a nonempty prior grid",
        ));
    }
    n_grid
        .iter()
        .map(|&n| {
            let prior = PriorSpec::new(n)?;
            let report = posterior(&prior, likelihood_innocent)?;
            Ok(SweepRow {
                prior_n: n,
                p_innocent: report.p_innocent,
            })
        })
        .collect()
}

/// The whole pipeline for an averaged-probability case: rating gap to win
/// probability to binomial streak likelihood to posterior.
pub fn end_to_end_case(
    rating: RatingInput,
    games: u32,
    wins: u32,
    prior: &PriorSpec,
    params: &EloParams,
) -> Result<CaseReport> {
    let delta = RatingDelta::new(rating.delta())?;
    let w = win_odds(delta, params);
    let q = win_probability(delta, params);
    let obs = StreakObservation::new(games, wins, WinModel::Uniform { q })?;
    let likelihood = binomial_streak_prob(&obs)?;
    let evidence = posterior(prior, likelihood)?;
    Ok(CaseReport {
        delta: delta.value(),
        win_odds: w,
        win_probability: q,
        games,
        wins,
        evidence,
    })
}
