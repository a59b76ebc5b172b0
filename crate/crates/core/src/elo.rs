//! Rating-difference model: maps an ELO rating gap to single-game win odds
//! and win probability, and inverts the map to recover an implied
//! performance rating from an observed score fraction.
//!
//! The scale is the classic logistic one: a gap of `delta` rating points
//! corresponds to win odds `base^(delta/scale)`, with `base = 10` and
//! `scale = 400` by default.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the rating-to-odds map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EloParams {
    base: f64,
    scale: f64,
}

impl EloParams {
    /// Builds the map `w = base^(delta/scale)`. Requires `base > 1` and
    /// `scale > 0`.
    pub fn new(base: f64, scale: f64) -> Result<Self> {
        if !base.is_finite() || base <= 1.0 {
            return Err(Error::invalid(format!(
                "elo base must be finite and > 1, got {base}"
            )));
        }
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::invalid(format!(
                "elo scale must be finite and > 0, got {scale}"
            )));
        }
        Ok(Self { base, scale })
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl Default for EloParams {
    /// The standard chess parameterization: base 10, scale 400.
    fn default() -> Self {
        Self {
            base: 10.0,
            scale: 400.0,
        }
    }
}

/// A rating difference in rating points (player minus opponent average).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RatingDelta(f64);

impl RatingDelta {
    pub fn new(delta: f64) -> Result<Self> {
        if !delta.is_finite() {
            return Err(Error::invalid(format!(
                "rating delta must be finite, got {delta}"
            )));
        }
        Ok(Self(delta))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Win odds for the stronger side of a rating gap: `w = base^(delta/scale)`.
///
/// Strictly increasing in `delta`, with `win_odds(-d) = 1/win_odds(d)`.
/// `powf` evaluates in log space internally, so gaps up to ~10 scales stay
/// well inside f64 range, and whole-scale landmarks (`pow(base, 1) = base`)
/// come out exact.
pub fn win_odds(delta: RatingDelta, params: &EloParams) -> f64 {
    params.base.powf(delta.value() / params.scale)
}

/// Single-game win probability `q = w/(1+w)` for a rating gap.
///
/// Evaluated as `1/(1 + base^(-delta/scale))` so that `q` stays accurate
/// when the odds are large.
pub fn win_probability(delta: RatingDelta, params: &EloParams) -> f64 {
    let neg = RatingDelta(-delta.value());
    1.0 / (1.0 + win_odds(neg, params))
}

/// The rating that would make `score_fraction` the expected score against
/// opposition averaging `opponent_avg`:
/// `opponent_avg + scale * log_base(s / (1 - s))`.
///
/// Inverse of [`win_probability`]: feeding the probability for gap `d`
/// back in recovers `opponent_avg + d`.
pub fn implied_performance(
    score_fraction: f64,
    opponent_avg: f64,
    params: &EloParams,
) -> Result<f64> {
    if !score_fraction.is_finite() || score_fraction <= 0.0 || score_fraction >= 1.0 {
        return Err(Error::Domain(format!(
            "score fraction must lie strictly inside (0, 1), got {score_fraction}; \
             a perfect or zero score implies an infinite performance rating \
             (Cromwell's rule: certainty is not a usable observation)"
        )));
    }
    if !opponent_avg.is_finite() {
        return Err(Error::invalid(format!(
            "opponent average rating must be finite, got {opponent_avg}"
        )));
    }
    let odds = score_fraction / (1.0 - score_fraction);
    Ok(opponent_avg + params.scale * odds.ln() / params.base.ln())
}
