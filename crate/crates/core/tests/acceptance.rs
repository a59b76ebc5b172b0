//! Release acceptance suite. One test per criterion; each prints a
//! `acceptance <n> (<name>): PASS/FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance is pinned here, in code. The oracles (exhaustive
//! outcome enumeration) are written against the definitions, not against
//! the implementations they check.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use streakweight::{
    binomial_pmf, end_to_end_case, load_history, longest_run_prob, longest_win_run,
    mean_jensen_ratio, per_game_probabilities, poisson_binomial_pmf, poisson_binomial_prob,
    posterior, scan_streak_prob_mc, simulate_summary, win_odds, win_probability, EloParams,
    IngestConfig, PriorSpec, RatingDelta, RatingInput, SimModel, StreakObservation, TiltModel,
    WinModel,
};

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($fmt)+));
        }
    };
}

fn criterion(id: u32, name: &str, body: impl FnOnce() -> Result<String, String>) {
    match body() {
        Ok(detail) => println!("acceptance {id} ({name}): PASS — {detail}"),
        Err(msg) => {
            println!("acceptance {id} ({name}): FAIL — {msg}");
            panic!("acceptance {id} ({name}) failed: {msg}");
        }
    }
}

fn delta(d: f64) -> RatingDelta {
    RatingDelta::new(d).unwrap()
}

fn fixture_path() -> String {
    format!(
        "{}/../../data/synthetic_streak46.csv",
        env!("CARGO_MANIFEST_DIR")
    )
}

#[test]
fn acceptance_1_headline_case() {
    criterion(1, "headline 45-of-46 case", || {
        let prior = PriorSpec::new(10_000.0).unwrap();
        let params = EloParams::default();
        let case = RatingInput::Delta(366.0);

        // warm once, then time a single evaluation
        let _ = end_to_end_case(case, 46, 45, &prior, &params).unwrap();
        let start = Instant::now();
        let report = end_to_end_case(case, 46, 45, &prior, &params).unwrap();
        let elapsed = start.elapsed();

        let p = report.evidence.likelihood_innocent;
        ensure!(
            (p - 0.0286).abs() <= 0.0002,
            "p = {p}, want 0.0286 +/- 0.0002"
        );
        let guilty = report.evidence.p_guilty;
        ensure!(
            (guilty - 0.0035).abs() <= 0.0005,
            "P(G|E) = {guilty}, want 0.0035 +/- 0.0005"
        );
        let innocent = report.evidence.p_innocent;
        ensure!(
            (innocent - 0.9965).abs() <= 0.0005,
            "P(I|E) = {innocent}, want 0.9965 +/- 0.0005"
        );
        ensure!(
            elapsed < Duration::from_millis(1),
            "took {elapsed:?}, want < 1 ms"
        );
        Ok(format!(
            "p = {p:.6}, P(G|E) = {guilty:.6}, P(I|E) = {innocent:.6}, {elapsed:?}"
        ))
    });
}

#[test]
fn acceptance_2_prior_sensitivity_case() {
    criterion(2, "skeptical prior N = 500", || {
        let report = posterior(&PriorSpec::new(500.0).unwrap(), 0.0285).unwrap();
        ensure!(
            (report.p_guilty - 0.065).abs() <= 0.001,
            "P(G|E) = {}, want 0.065 +/- 0.001",
            report.p_guilty
        );
        ensure!(
            (report.p_innocent - 0.935).abs() <= 0.001,
            "P(I|E) = {}, want 0.935 +/- 0.001",
            report.p_innocent
        );
        Ok(format!(
            "P(G|E) = {:.6}, P(I|E) = {:.6}",
            report.p_guilty, report.p_innocent
        ))
    });
}

#[test]
fn acceptance_3_elo_landmarks() {
    criterion(3, "rating-gap landmarks", || {
        let params = EloParams::default();
        let w_366 = win_odds(delta(366.0), &params);
        ensure!(
            (w_366 - 8.23).abs() <= 0.01,
            "w(366) = {w_366}, want 8.23 +/- 0.01"
        );
        let q_366 = win_probability(delta(366.0), &params);
        ensure!(
            (q_366 - 0.8916).abs() <= 0.0005,
            "q(366) = {q_366}, want 0.8916 +/- 0.0005"
        );
        let q_0 = win_probability(delta(0.0), &params);
        ensure!(q_0 == 0.5, "q(0) = {q_0}, want exactly 0.5");
        let w_400 = win_odds(delta(400.0), &params);
        ensure!(w_400 == 10.0, "w(400) = {w_400}, want exactly 10");
        Ok(format!(
            "w(366) = {w_366:.4}, q(366) = {q_366:.6}, q(0) = {q_0}, w(400) = {w_400}"
        ))
    });
}

#[test]
fn acceptance_4_jensen_experiment() {
    criterion(4, "jensen ratio experiment", || {
        let start = Instant::now();
        let exp = mean_jensen_ratio(0.85, 0.9, 46, 10_000, 20231120).unwrap();
        let elapsed = start.elapsed();
        ensure!(
            (0.992..=0.998).contains(&exp.mean_ratio),
            "mean ratio = {}, want within [0.992, 0.998]",
            exp.mean_ratio
        );
        ensure!(
            elapsed < Duration::from_secs(5),
            "took {elapsed:?}, want < 5 s"
        );
        Ok(format!(
            "mean ratio = {:.6} over {} reps, {elapsed:?}",
            exp.mean_ratio, exp.reps
        ))
    });
}

/// Compensated accumulator; the enumeration oracles add up to 2^20 terms
/// and must stay well under the 1e-12 comparison tolerance themselves.
#[derive(Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Oracle: Poisson-binomial pmf by walking all 2^m outcomes.
fn enumerate_pmf(probs: &[f64]) -> Vec<f64> {
    let m = probs.len();
    assert!(m <= 20, "enumeration oracle is exponential in m");
    let mut pmf = vec![KahanSum::default(); m + 1];
    for mask in 0u32..(1u32 << m) {
        let mut p = 1.0;
        let mut wins = 0usize;
        for (i, &q) in probs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                p *= q;
                wins += 1;
            } else {
                p *= 1.0 - q;
            }
        }
        pmf[wins].add(p);
    }
    pmf.into_iter().map(|acc| acc.sum).collect()
}

#[test]
fn acceptance_5_poisson_binomial_oracle() {
    criterion(5, "poisson-binomial vs enumeration", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(1729);
        let mut worst = 0.0f64;
        for case in 0..100 {
            let m = rng.gen_range(1..=12usize);
            let probs: Vec<f64> = (0..m).map(|_| rng.gen_range(0.02..0.98)).collect();
            let oracle = enumerate_pmf(&probs);
            let pmf = poisson_binomial_pmf(&probs).unwrap();
            for (k, (&got, &want)) in pmf.iter().zip(oracle.iter()).enumerate() {
                let diff = (got - want).abs();
                worst = worst.max(diff);
                ensure!(
                    diff <= 1e-12,
                    "case {case}, m = {m}, k = {k}: |{got} - {want}| = {diff}"
                );
            }
        }

        // equal-q inputs must collapse to the binomial pmf
        let mut worst_log = 0.0f64;
        for &m in &[1u32, 2, 5, 12, 46, 100, 200] {
            for &q in &[0.3, 0.5, 0.8916] {
                let pmf = poisson_binomial_pmf(&vec![q; m as usize]).unwrap();
                for (k, &got) in pmf.iter().enumerate() {
                    let want = binomial_pmf(m, k as u32, q).unwrap();
                    let log_diff = (got.ln() - want.ln()).abs();
                    worst_log = worst_log.max(log_diff);
                    ensure!(
                        log_diff <= 1e-12,
                        "equal-q m = {m}, q = {q}, k = {k}: log diff = {log_diff}"
                    );
                    if m <= 12 {
                        ensure!(
                            (got - want).abs() <= 1e-12,
                            "equal-q m = {m}, q = {q}, k = {k}: |{got} - {want}|"
                        );
                    }
                }
            }
        }
        let elapsed = start.elapsed();
        ensure!(
            elapsed < Duration::from_secs(10),
            "took {elapsed:?}, want < 10 s"
        );
        Ok(format!(
            "100 random sets + equal-q grids; worst abs diff {worst:.2e}, worst log diff {worst_log:.2e}, {elapsed:?}"
        ))
    });
}

/// Oracle: longest-run exceedance probabilities for every run length at
/// once, from one 2^n walk.
fn enumerate_run_exceedance(n: u32, q: f64) -> Vec<f64> {
    assert!(n <= 20);
    // tally[r] = P(longest run == r), then suffix-sum
    let mut tally = vec![KahanSum::default(); n as usize + 1];
    for mask in 0u64..(1u64 << n) {
        let seq: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        let wins = seq.iter().filter(|&&w| w).count() as i32;
        let p = q.powi(wins) * (1.0 - q).powi(n as i32 - wins);
        tally[longest_win_run(&seq)].add(p);
    }
    let mut exceed = vec![0.0f64; n as usize + 2];
    for r in (0..=n as usize).rev() {
        exceed[r] = exceed[r + 1] + tally[r].sum;
    }
    exceed.truncate(n as usize + 1);
    exceed
}

#[test]
fn acceptance_6_longest_run_oracle() {
    criterion(6, "longest-run recurrence vs enumeration", || {
        let spot = longest_run_prob(3, 2, 0.5).unwrap();
        ensure!(
            (spot - 0.375).abs() <= 1e-12,
            "P(run >= 2 in 3) = {spot}, want 0.375"
        );

        let mut worst = 0.0f64;
        for &q in &[0.3, 0.5, 0.8916] {
            for n in 1..=20u32 {
                let oracle = enumerate_run_exceedance(n, q);
                for run in 1..=n {
                    let got = longest_run_prob(n, run, q).unwrap();
                    let want = oracle[run as usize];
                    let diff = (got - want).abs();
                    worst = worst.max(diff);
                    ensure!(
                        diff <= 1e-12,
                        "n = {n}, run = {run}, q = {q}: |{got} - {want}| = {diff}"
                    );
                }
            }
        }
        Ok(format!(
            "all (n <= 20, run <= n, q in {{0.3, 0.5, 0.8916}}); worst diff {worst:.2e}"
        ))
    });
}

#[test]
fn acceptance_7_bayes_identities() {
    criterion(7, "bayes identity suite", || {
        let mut rng = ChaCha8Rng::seed_from_u64(8128);
        for _ in 0..1000 {
            let n = 10f64.powf(rng.gen_range(-1.0..7.0));
            let p = 10f64.powf(rng.gen_range(-9.0..0.0));
            let report = posterior(&PriorSpec::new(n).unwrap(), p).unwrap();
            let total = report.p_guilty + report.p_innocent;
            ensure!(
                (total - 1.0).abs() <= 1e-12,
                "N = {n}, p = {p}: total = {total}"
            );
            let ratio = report.p_innocent / report.p_guilty;
            let rel =
                ((ratio - report.posterior_odds_innocence) / report.posterior_odds_innocence).abs();
            ensure!(rel <= 1e-9, "N = {n}, p = {p}: odds mismatch rel = {rel}");
        }

        // monotonicity over randomized sorted grids
        for _ in 0..50 {
            let p = 10f64.powf(rng.gen_range(-6.0..-0.01));
            let mut grid: Vec<f64> = (0..20)
                .map(|_| 10f64.powf(rng.gen_range(0.0..6.0)))
                .collect();
            grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
            grid.dedup();
            let mut last = f64::NEG_INFINITY;
            for &n in &grid {
                let report = posterior(&PriorSpec::new(n).unwrap(), p).unwrap();
                ensure!(report.p_innocent > last, "not increasing in N at N = {n}");
                last = report.p_innocent;
            }

            let n = 10f64.powf(rng.gen_range(0.0..6.0));
            let mut ps: Vec<f64> = (0..20)
                .map(|_| 10f64.powf(rng.gen_range(-9.0..0.0)))
                .collect();
            ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ps.dedup();
            let mut last = f64::NEG_INFINITY;
            for &p in &ps {
                let report = posterior(&PriorSpec::new(n).unwrap(), p).unwrap();
                ensure!(report.p_innocent > last, "not increasing in p at p = {p}");
                last = report.p_innocent;
            }
        }

        // boundary rejection
        ensure!(
            posterior(&PriorSpec::new(100.0).unwrap(), 0.0).is_err(),
            "p = 0 must be rejected"
        );
        ensure!(PriorSpec::new(0.0).is_err(), "N = 0 must be rejected");
        ensure!(PriorSpec::new(-3.0).is_err(), "N < 0 must be rejected");
        Ok("1000 identity draws, 50 monotone grids, boundaries rejected".to_string())
    });
}

#[test]
fn acceptance_8_monte_carlo_determinism() {
    criterion(8, "monte carlo thread-count determinism", || {
        let with_threads = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                let scan_model = SimModel::Tilt(TiltModel::new(0.8916, 0.1).unwrap());
                let scan = scan_streak_prob_mc(3500, &scan_model, 46, 45, 20_000, 42).unwrap();
                let jensen = mean_jensen_ratio(0.85, 0.9, 46, 10_000, 42).unwrap();
                let sim_model = SimModel::Independent(WinModel::Uniform { q: 0.8916 });
                let sim = simulate_summary(500, 2_000, &sim_model, 42).unwrap();
                (scan, jensen, sim)
            })
        };
        let (scan_1, jensen_1, sim_1) = with_threads(1);
        let (scan_n, jensen_n, sim_n) = with_threads(8);

        ensure!(
            scan_1.estimate.to_bits() == scan_n.estimate.to_bits()
                && scan_1.std_error.to_bits() == scan_n.std_error.to_bits()
                && scan_1.hits == scan_n.hits,
            "scan differs: {scan_1:?} vs {scan_n:?}"
        );
        ensure!(
            jensen_1.mean_ratio.to_bits() == jensen_n.mean_ratio.to_bits()
                && jensen_1.std_error.to_bits() == jensen_n.std_error.to_bits(),
            "jensen differs: {jensen_1:?} vs {jensen_n:?}"
        );
        ensure!(
            sim_1 == sim_n && sim_1.win_rate.to_bits() == sim_n.win_rate.to_bits(),
            "simulation differs: {sim_1:?} vs {sim_n:?}"
        );
        Ok(format!(
            "scan estimate {:.6}, jensen mean {:.6}, win rate {:.6} identical on 1 and 8 threads",
            scan_1.estimate, jensen_1.mean_ratio, sim_1.win_rate
        ))
    });
}

#[test]
fn acceptance_9_end_to_end_csv() {
    criterion(9, "bundled history end to end", || {
        let history = load_history(fixture_path(), &IngestConfig::default()).unwrap();
        ensure!(
            history.record_count() == 46,
            "expected 46 games, found {}",
            history.record_count()
        );
        ensure!(
            history.wins() == 45,
            "expected 45 wins, found {}",
            history.wins()
        );
        let opponent_mean: f64 = history
            .records()
            .iter()
            .map(|r| r.opponent_rating)
            .sum::<f64>()
            / history.record_count() as f64;
        ensure!(
            (opponent_mean - 2933.0).abs() < 1e-9,
            "opponent mean = {opponent_mean}, want 2933"
        );
        ensure!(
            history
                .records()
                .iter()
                .all(|r| r.player_rating == Some(3300.0)),
            "player rating must be 3300 throughout"
        );

        let probs = per_game_probabilities(&history, &EloParams::default()).unwrap();
        let obs = StreakObservation::new(
            history.games() as u32,
            history.wins() as u32,
            WinModel::PerGame { probs },
        )
        .unwrap();
        let p = poisson_binomial_prob(&obs, 45).unwrap();
        ensure!(
            (p - 0.0286).abs() <= 0.0002,
            "p = {p}, want 0.0286 +/- 0.0002"
        );

        let report = posterior(&PriorSpec::new(10_000.0).unwrap(), p).unwrap();
        ensure!(
            (report.p_guilty - 0.0035).abs() <= 0.0005,
            "P(G|E) = {}, want 0.0035 +/- 0.0005",
            report.p_guilty
        );
        ensure!(
            (report.p_innocent - 0.9965).abs() <= 0.0005,
            "P(I|E) = {}, want 0.9965 +/- 0.0005",
            report.p_innocent
        );
        Ok(format!(
            "p = {p:.6}, P(G|E) = {:.6}, P(I|E) = {:.6}",
            report.p_guilty, report.p_innocent
        ))
    });
}
