//! Sequential against rayon-parallel batches of simulated paths.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use iskew::parallel::map_indexed_sequential;
#[cfg(feature = "parallel")]
use iskew::parallel::map_indexed_parallel;
use iskew::rng::PathStreams;
use iskew::simulate::{excursion_flip_path, smooth_sde_endpoint};
use iskew::suite::reference_step_beta;
use iskew::{BetaFunction, TimeGrid};

const PATHS: u64 = 512;

fn excursion_batch(c: &mut Criterion) {
    let beta = reference_step_beta();
    let grid = TimeGrid::with_step(1.0, 1e-3).unwrap();
    let one = |i: u64| *excursion_flip_path(&beta, grid, &mut PathStreams::new(1, i)).unwrap().values.last().unwrap();

    let mut g = c.benchmark_group("excursion_batch");
    g.throughput(Throughput::Elements(PATHS));
    g.bench_function(BenchmarkId::new("sequential", PATHS), |b| {
        b.iter(|| black_box(map_indexed_sequential(PATHS, one)))
    });
    #[cfg(feature = "parallel")]
    g.bench_function(BenchmarkId::new("parallel", PATHS), |b| {
        b.iter(|| black_box(map_indexed_parallel(PATHS, one)))
    });
    g.finish();
}

fn sde_batch(c: &mut Criterion) {
    let beta = BetaFunction::constant(0.6).unwrap();
    let grid = TimeGrid::with_step(1.0, 1e-3).unwrap();
    let one = |i: u64| smooth_sde_endpoint(&beta, grid, 0.0, &mut PathStreams::new(2, i)).unwrap();

    let mut g = c.benchmark_group("sde_batch");
    g.throughput(Throughput::Elements(PATHS));
    g.bench_function(BenchmarkId::new("sequential", PATHS), |b| {
        b.iter(|| black_box(map_indexed_sequential(PATHS, one)))
    });
    #[cfg(feature = "parallel")]
    g.bench_function(BenchmarkId::new("parallel", PATHS), |b| {
        b.iter(|| black_box(map_indexed_parallel(PATHS, one)))
    });
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = excursion_batch, sde_batch
}
criterion_main!(benches);
