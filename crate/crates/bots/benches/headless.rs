use coopvax_bots::headless::run_headless_sequential;
use coopvax_bots::policy::PolicyKind;
use coopvax_core::maps::bundled_campaign;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const REPS: usize = 8;
const MAX_TICKS: u64 = 2_000;

fn repetitions(c: &mut Criterion) {
    let campaign = bundled_campaign();
    let policies = vec![PolicyKind::Greedy; 4];
    let mut group = c.benchmark_group("headless_reps");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("sequential", REPS), |b| {
        b.iter(|| run_headless_sequential(&campaign, &policies, 1, REPS, MAX_TICKS).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function(BenchmarkId::new("parallel", REPS), |b| {
        b.iter(|| coopvax_bots::headless::run_headless_parallel(&campaign, &policies, 1, REPS, MAX_TICKS).unwrap())
    });
    group.finish();
}

criterion_group!(benches, repetitions);
criterion_main!(benches);
