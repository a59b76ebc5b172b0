//! Benchmark-only crate; see `benches/likelihood.rs`.
//!
//! Shared input builders live here so the bench targets stay small.

/// Per-game win probabilities spread evenly across `(low, high)`.
pub fn spread_probs(len: usize, low: f64, high: f64) -> Vec<f64> {
    (0..len)
        .map(|i| low + (high - low) * (i as f64 + 0.5) / len as f64)
        .collect()
}
