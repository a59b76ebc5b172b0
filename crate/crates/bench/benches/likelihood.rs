use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use streakweight::{
    end_to_end_case, longest_run_prob, poisson_binomial_pmf, scan_streak_prob_mc, EloParams,
    PriorSpec, RatingInput, SimModel, WinModel,
};
use streakweight_bench::spread_probs;

fn bench_poisson_binomial(c: &mut Criterion) {
    let mut group = c.benchmark_group("poisson_binomial_pmf");
    for &m in &[46usize, 200, 1000] {
        let probs = spread_probs(m, 0.85, 0.93);
        group.bench_with_input(BenchmarkId::from_parameter(m), &probs, |b, probs| {
            b.iter(|| poisson_binomial_pmf(black_box(probs)).unwrap())
        });
    }
    group.finish();
}

fn bench_longest_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("longest_run_prob");
    for &n in &[46u32, 500, 3500] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| longest_run_prob(black_box(n), 46.min(n), 0.8916).unwrap())
        });
    }
    group.finish();
}

fn bench_scan_mc(c: &mut Criterion) {
    let model = SimModel::Independent(WinModel::Uniform { q: 0.8916 });
    c.bench_function("scan_mc_500_games_2000_trials", |b| {
        b.iter(|| scan_streak_prob_mc(black_box(500), &model, 46, 45, 2000, 7).unwrap())
    });
}

fn bench_end_to_end(c: &mut Criterion) {
    let prior = PriorSpec::new(10_000.0).unwrap();
    let params = EloParams::default();
    c.bench_function("end_to_end_headline_case", |b| {
        b.iter(|| {
            end_to_end_case(
                black_box(RatingInput::Delta(366.0)),
                46,
                45,
                &prior,
                &params,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_poisson_binomial,
    bench_longest_run,
    bench_scan_mc,
    bench_end_to_end
);
criterion_main!(benches);
