//! Likelihood of an observed win streak under the "no foul play" hypothesis.
//!
//! Exact machinery: binomial streak probability for a single averaged win
//! probability, and the Poisson-binomial distribution when every game has
//! its own win probability. History-wide machinery: an exact longest-run
//! recurrence for i.i.d. games and seeded Monte Carlo scan estimators for
//! heterogeneous or serially dependent games.
//!
//! All probability mass work is done in log space; results are reported in
//! linear space. Every Monte Carlo estimator is deterministic for a fixed
//! `(seed, trials)` pair regardless of how many worker threads execute it:
//! trials are cut into fixed-size chunks, each chunk runs on its own
//! counter-derived substream, and partial results are merged in chunk order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trials per Monte Carlo substream chunk.
const MC_CHUNK_TRIALS: u64 = 1024;

/// How the per-game win probabilities of an observed streak are modeled.
#[derive(Debug, Clone, PartialEq)]
pub enum WinModel {
    /// One shared win probability for every game.
    Uniform { q: f64 },
    /// An explicit win probability per game, in playing order.
    PerGame { probs: Vec<f64> },
}

impl WinModel {
    /// Checks every probability lies strictly inside (0, 1) and, when
    /// `expected_len` is given, that a per-game vector has that length.
    pub fn validate(&self, expected_len: Option<usize>) -> Result<()> {
        match self {
            WinModel::Uniform { q } => check_probability("win probability", *q),
            WinModel::PerGame { probs } => {
                if let Some(len) = expected_len {
                    if probs.len() != len {
                        return Err(Error::invalid(format!(
                            "per-game probability vector has length {}, expected {len}",
                            probs.len()
                        )));
                    }
                }
                for (i, &q) in probs.iter().enumerate() {
                    check_probability(&format!("win probability for game {i}"), q)?;
                }
                Ok(())
            }
        }
    }
}

/// An observed streak: `wins` wins out of `games` games plus the model for
/// how likely each win was.
#[derive(Debug, Clone, PartialEq)]
pub struct StreakObservation {
    games: u32,
    wins: u32,
    model: WinModel,
}

impl StreakObservation {
    pub fn new(games: u32, wins: u32, model: WinModel) -> Result<Self> {
        if games == 0 {
            return Err(Error::invalid("a streak needs at least one game"));
        }
        if wins > games {
            return Err(Error::invalid(format!(
                "{wins} wins cannot come out of {games} games"
            )));
        }
        model.validate(Some(games as usize))?;
        Ok(Self { games, wins, model })
    }

    pub fn games(&self) -> u32 {
        self.games
    }

    pub fn wins(&self) -> u32 {
        self.wins
    }

    pub fn model(&self) -> &WinModel {
        &self.model
    }
}

/// Serial dependence between consecutive games: after the streak player
/// wins, the next opponent is more likely to be tilting, which raises the
/// player's win probability from `q_base` to
/// `q_base + loss_penalty * (1 - q_base)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltModel {
    q_base: f64,
    loss_penalty: f64,
}

impl TiltModel {
    pub fn new(q_base: f64, loss_penalty: f64) -> Result<Self> {
        check_probability("base win probability", q_base)?;
        if !loss_penalty.is_finite() || !(0.0..1.0).contains(&loss_penalty) {
            return Err(Error::invalid(format!(
                "loss penalty must lie in [0, 1), got {loss_penalty}"
            )));
        }
        Ok(Self {
            q_base,
            loss_penalty,
        })
    }

    pub fn q_base(&self) -> f64 {
        self.q_base
    }

    pub fn loss_penalty(&self) -> f64 {
        self.loss_penalty
    }

    /// Win probability for the game after a win. Always in (0, 1); the
    /// clamp only shaves float noise in the `q_base -> 1` corner.
    fn boosted_prob(&self) -> f64 {
        (self.q_base + self.loss_penalty * (1.0 - self.q_base)).min(1.0 - f64::EPSILON)
    }
}

/// Game-generating model for simulation and scan estimation.
#[derive(Debug, Clone, PartialEq)]
pub enum SimModel {
    /// Games are independent draws from the given win model.
    Independent(WinModel),
    /// Consecutive games are positively correlated through opponent tilt.
    Tilt(TiltModel),
}

impl SimModel {
    fn validate(&self, n: usize) -> Result<()> {
        match self {
            SimModel::Independent(model) => model.validate(Some(n)),
            SimModel::Tilt(_) => Ok(()),
        }
    }
}

/// A Monte Carlo probability estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub hits: u64,
}

/// Mean Jensen ratio over seeded replications of a random probability
/// vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JensenExperiment {
    pub mean_ratio: f64,
    pub std_error: f64,
    pub reps: u64,
}

/// Aggregate statistics over simulated game histories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub reps: u64,
    pub games_per_rep: usize,
    pub total_wins: u64,
    pub win_rate: f64,
    /// Binomial standard error of the win rate; treats games as
    /// independent, so it understates the error under a tilt model.
    pub win_rate_std_error: f64,
    /// Longest win run observed across all replications.
    pub longest_run: usize,
}

/// Probability of exactly `wins` wins in `games` games at one shared win
/// probability: `C(m, k) q^k (1-q)^(m-k)`.
///
/// Rejects a per-game model; heterogeneous probabilities call for
/// [`poisson_binomial_prob`].
pub fn binomial_streak_prob(obs: &StreakObservation) -> Result<f64> {
    match obs.model() {
        WinModel::Uniform { q } => binomial_pmf(obs.games(), obs.wins(), *q),
        WinModel::PerGame { .. } => Err(Error::invalid(
            "observation carries per-game probabilities; use poisson_binomial_prob",
        )),
    }
}

/// Binomial point mass `C(m, k) q^k (1-q)^(m-k)`, evaluated in log space.
pub fn binomial_pmf(games: u32, wins: u32, q: f64) -> Result<f64> {
    if wins > games {
        return Err(Error::invalid(format!(
            "{wins} wins cannot come out of {games} games"
        )));
    }
    check_probability("win probability", q)?;
    let ln_p = ln_choose(u64::from(games), u64::from(wins))
        + f64::from(wins) * q.ln()
        + f64::from(games - wins) * (-q).ln_1p();
    Ok(ln_p.exp())
}

/// Upper binomial tail `P(X >= min_wins)` for `games` games at win
/// probability `q`.
pub fn binomial_tail_prob(games: u32, min_wins: u32, q: f64) -> Result<f64> {
    check_probability("win probability", q)?;
    if min_wins == 0 {
        return Ok(1.0);
    }
    if min_wins > games {
        return Ok(0.0);
    }
    let mut tail = 0.0;
    for k in min_wins..=games {
        tail += binomial_pmf(games, k, q)?;
    }
    Ok(tail.min(1.0))
}

/// Probability of exactly `k` wins when every game has its own win
/// probability, via the exact O(m^2) Poisson-binomial convolution.
///
/// Reduces to [`binomial_streak_prob`] when all probabilities are equal.
pub fn poisson_binomial_prob(obs: &StreakObservation, k: u32) -> Result<f64> {
    let probs = match obs.model() {
        WinModel::PerGame { probs } => probs,
        WinModel::Uniform { .. } => {
            return Err(Error::invalid(
                "observation carries a uniform probability; use binomial_streak_prob",
            ))
        }
    };
    if k > obs.games() {
        return Err(Error::invalid(format!(
            "win count {k} exceeds the {} observed games",
            obs.games()
        )));
    }
    let pmf = poisson_binomial_pmf(probs)?;
    Ok(pmf[k as usize])
}

/// Full Poisson-binomial mass function over 0..=m wins for per-game win
/// probabilities, by convolving one game at a time.
pub fn poisson_binomial_pmf(probs: &[f64]) -> Result<Vec<f64>> {
    if probs.is_empty() {
        return Err(Error::invalid(
            "poisson-binomial pmf needs at least one probability",
        ));
    }
    WinModel::PerGame {
        probs: probs.to_vec(),
    }
    .validate(None)?;

    let mut pmf = vec![0.0f64; probs.len() + 1];
    pmf[0] = 1.0;
    for (i, &q) in probs.iter().enumerate() {
        // walk the win count downward so each cell still holds the
        // previous game's value when it is read
        pmf[i + 1] = pmf[i] * q;
        for j in (1..=i).rev() {
            pmf[j] = pmf[j] * (1.0 - q) + pmf[j - 1] * q;
        }
        pmf[0] *= 1.0 - q;
    }
    Ok(pmf)
}

/// Ratio of the product of per-game probabilities to the same-mean
/// binomial product: `(prod q_i) / mean(q)^m`.
///
/// By AM-GM this never exceeds 1, with equality exactly when all entries
/// agree; the gap measures how much an averaged win probability overstates
/// a perfect streak's likelihood.
pub fn jensen_ratio(probs: &[f64]) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::invalid(
            "jensen ratio needs at least one probability",
        ));
    }
    WinModel::PerGame {
        probs: probs.to_vec(),
    }
    .validate(None)?;
    let m = probs.len() as f64;
    let mean = probs.iter().sum::<f64>() / m;
    let ln_sum: f64 = probs.iter().map(|q| q.ln()).sum();
    let ratio = (ln_sum - m * mean.ln()).exp();
    // AM-GM bounds the true ratio by 1; the min shaves float noise at equality.
    Ok(ratio.min(1.0))
}

/// Exact probability that `n` i.i.d. games at win probability `q` contain
/// at least one run of `run` or more consecutive wins.
///
/// Dynamic program over (games played, current trailing run length),
/// tracking the mass that has not yet produced a qualifying run.
/// `run > n` returns 0 by convention: no window is long enough.
pub fn longest_run_prob(n: u32, run: u32, q: f64) -> Result<f64> {
    if run == 0 {
        return Err(Error::invalid("run length must be at least 1"));
    }
    check_probability("win probability", q)?;
    if run > n {
        return Ok(0.0);
    }
    let r = run as usize;
    let mut state = vec![0.0f64; r];
    let mut next = vec![0.0f64; r];
    state[0] = 1.0;
    for _ in 0..n {
        next.iter_mut().for_each(|v| *v = 0.0);
        for (j, &p) in state.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            next[0] += p * (1.0 - q);
            if j + 1 < r {
                next[j + 1] += p * q;
            }
            // j + 1 == r: the run is complete and the mass is absorbed
        }
        std::mem::swap(&mut state, &mut next);
    }
    Ok(1.0 - state.iter().sum::<f64>())
}

/// Longest run of consecutive `true` entries.
pub fn longest_win_run(seq: &[bool]) -> usize {
    let mut best = 0;
    let mut current = 0;
    for &win in seq {
        if win {
            current += 1;
            best = best.max(current);
        } else {
            current = 0;
        }
    }
    best
}

/// Simulates one `n`-game win/loss history, reproducible per seed.
pub fn simulate_history(n: usize, model: &SimModel, seed: u64) -> Result<Vec<bool>> {
    model.validate(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf = Vec::with_capacity(n);
    fill_history(&mut buf, n, model, &mut rng);
    Ok(buf)
}

/// Monte Carlo estimate of the probability that some window of `window`
/// consecutive games out of `n` contains at least `wins_required` wins.
///
/// This is the history-wide companion to the single-window likelihood: it
/// answers "how surprising is it that such a stretch exists anywhere",
/// not "how likely was this particular stretch".
pub fn scan_streak_prob_mc(
    n: usize,
    model: &SimModel,
    window: usize,
    wins_required: usize,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if window == 0 || window > n {
        return Err(Error::invalid(format!(
            "window must lie in 1..={n}, got {window}"
        )));
    }
    if wins_required > window {
        return Err(Error::invalid(format!(
            "cannot require {wins_required} wins from a window of {window} games"
        )));
    }
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    model.validate(n)?;

    let chunks = trials.div_ceil(MC_CHUNK_TRIALS);
    // u64 addition is exact, so a parallel sum over chunks is already
    // independent of the worker count.
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(substream_seed(seed, chunk));
            let chunk_trials = MC_CHUNK_TRIALS.min(trials - chunk * MC_CHUNK_TRIALS);
            let mut buf = Vec::with_capacity(n);
            let mut hits = 0u64;
            for _ in 0..chunk_trials {
                fill_history(&mut buf, n, model, &mut rng);
                if any_window_hits(&buf, window, wins_required) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();

    let estimate = hits as f64 / trials as f64;
    let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    Ok(McEstimate {
        estimate,
        std_error,
        trials,
        hits,
    })
}

/// Mean of [`jensen_ratio`] over `reps` replications of a `games`-long
/// probability vector drawn i.i.d. from U(low, high).
pub fn mean_jensen_ratio(
    low: f64,
    high: f64,
    games: usize,
    reps: u64,
    seed: u64,
) -> Result<JensenExperiment> {
    check_probability("low bound", low)?;
    check_probability("high bound", high)?;
    if low >= high {
        return Err(Error::invalid(format!(
            "probability range is empty: low {low} >= high {high}"
        )));
    }
    if games == 0 {
        return Err(Error::invalid(
            "at least one game per replication is required",
        ));
    }
    if reps == 0 {
        return Err(Error::invalid("at least one replication is required"));
    }

    let chunks = reps.div_ceil(MC_CHUNK_TRIALS);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(substream_seed(seed, chunk));
            let chunk_reps = MC_CHUNK_TRIALS.min(reps - chunk * MC_CHUNK_TRIALS);
            let mut probs = vec![0.0f64; games];
            let mut sum = 0.0f64;
            let mut sum_sq = 0.0f64;
            for _ in 0..chunk_reps {
                for p in probs.iter_mut() {
                    *p = rng.gen_range(low..high);
                }
                let ratio = jensen_ratio(&probs).expect("draws lie inside (0, 1)");
                sum += ratio;
                sum_sq += ratio * ratio;
            }
            (sum, sum_sq)
        })
        .collect();

    // merge in chunk order so the float sums are thread-count independent
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for (s, s2) in partials {
        sum += s;
        sum_sq += s2;
    }
    let mean_ratio = sum / reps as f64;
    let variance = (sum_sq / reps as f64 - mean_ratio * mean_ratio).max(0.0);
    let std_error = (variance / reps as f64).sqrt();
    Ok(JensenExperiment {
        mean_ratio,
        std_error,
        reps,
    })
}

/// Simulates `reps` histories of `games` games and aggregates win-rate and
/// longest-run statistics. Deterministic per `(seed, reps)`.
pub fn simulate_summary(
    games: usize,
    reps: u64,
    model: &SimModel,
    seed: u64,
) -> Result<SimulationSummary> {
    if games == 0 {
        return Err(Error::invalid(
            "at least one game per replication is required",
        ));
    }
    if reps == 0 {
        return Err(Error::invalid("at least one replication is required"));
    }
    model.validate(games)?;

    let chunks = reps.div_ceil(MC_CHUNK_TRIALS);
    let partials: Vec<(u64, usize)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(substream_seed(seed, chunk));
            let chunk_reps = MC_CHUNK_TRIALS.min(reps - chunk * MC_CHUNK_TRIALS);
            let mut buf = Vec::with_capacity(games);
            let mut wins = 0u64;
            let mut longest = 0usize;
            for _ in 0..chunk_reps {
                fill_history(&mut buf, games, model, &mut rng);
                wins += buf.iter().filter(|&&w| w).count() as u64;
                longest = longest.max(longest_win_run(&buf));
            }
            (wins, longest)
        })
        .collect();

    let mut total_wins = 0u64;
    let mut longest_run = 0usize;
    for (wins, longest) in partials {
        total_wins += wins;
        longest_run = longest_run.max(longest);
    }
    let total_games = games as u64 * reps;
    let win_rate = total_wins as f64 / total_games as f64;
    let win_rate_std_error = (win_rate * (1.0 - win_rate) / total_games as f64).sqrt();
    Ok(SimulationSummary {
        reps,
        games_per_rep: games,
        total_wins,
        win_rate,
        win_rate_std_error,
        longest_run,
    })
}

fn fill_history(buf: &mut Vec<bool>, n: usize, model: &SimModel, rng: &mut ChaCha8Rng) {
    buf.clear();
    match model {
        SimModel::Independent(WinModel::Uniform { q }) => {
            for _ in 0..n {
                buf.push(rng.gen::<f64>() < *q);
            }
        }
        SimModel::Independent(WinModel::PerGame { probs }) => {
            for &q in probs.iter().take(n) {
                buf.push(rng.gen::<f64>() < q);
            }
        }
        SimModel::Tilt(tilt) => {
            let boosted = tilt.boosted_prob();
            let mut prev_win = false;
            for _ in 0..n {
                let q = if prev_win { boosted } else { tilt.q_base };
                let win = rng.gen::<f64>() < q;
                buf.push(win);
                prev_win = win;
            }
        }
    }
}

fn any_window_hits(seq: &[bool], window: usize, wins_required: usize) -> bool {
    if wins_required == 0 {
        return true;
    }
    let mut count = seq[..window].iter().filter(|&&w| w).count();
    if count >= wins_required {
        return true;
    }
    for start in 1..=seq.len() - window {
        count -= usize::from(seq[start - 1]);
        count += usize::from(seq[start + window - 1]);
        if count >= wins_required {
            return true;
        }
    }
    false
}

/// Log binomial coefficient, summed term by term to stay sharp for the
/// small counts this crate works with.
fn ln_choose(m: u64, k: u64) -> f64 {
    debug_assert!(k <= m);
    let k = k.min(m - k);
    let mut acc = 0.0;
    for i in 1..=k {
        acc += ((m - k + i) as f64).ln() - (i as f64).ln();
    }
    acc
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !p.is_finite() || p <= 0.0 || p >= 1.0 {
        return Err(Error::Domain(format!(
            "{name} must lie strictly inside (0, 1), got {p}; probabilities of \
             exactly 0 or 1 are rejected (Cromwell's rule)"
        )));
    }
    Ok(())
}

/// SplitMix64-style mix of a master seed and a stream counter; stable
/// across platforms and worker counts.
fn substream_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
