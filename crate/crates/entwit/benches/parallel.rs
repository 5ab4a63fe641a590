//! Compares the data-parallel map against its sequential twin on the three
//! hot loops: separable-state sampling, family sampling with vectorization,
//! and RBF Gram-row evaluation.
//!
//! Run with `cargo bench` (rayon path, default features) and
//! `cargo bench --no-default-features` to measure the sequential build.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use entwit::par;
use entwit::pauli::PauliVector;
use entwit::pipeline::generate_samples;
use entwit::rng::RootSeed;
use entwit::sampling::{sample_family_orbit, sample_separable, FamilyTag, Orbit};
use entwit::svm::rbf_kernel;

fn separable_batch(c: &mut Criterion) {
    const N: usize = 64;
    let root = RootSeed(7);
    let job = |i: usize| {
        let mut rng = root.substream(1, i as u64);
        sample_separable(&mut rng).features()
    };
    let mut group = c.benchmark_group("separable_batch");
    group.bench_function(BenchmarkId::new("map", "parallel"), |b| {
        b.iter(|| par::map_indexed(N, job))
    });
    group.bench_function(BenchmarkId::new("map", "sequential"), |b| {
        b.iter(|| par::map_indexed_seq(N, job))
    });
    group.finish();
}

fn family_batch(c: &mut Criterion) {
    const N: usize = 256;
    let root = RootSeed(11);
    let job = |i: usize| {
        let mut rng = root.substream(2, i as u64);
        sample_family_orbit(FamilyTag::E3, Orbit::Epsilon(0.5), &mut rng)
            .unwrap()
            .features()
    };
    let mut group = c.benchmark_group("family_batch");
    group.bench_function(BenchmarkId::new("map", "parallel"), |b| {
        b.iter(|| par::map_indexed(N, job))
    });
    group.bench_function(BenchmarkId::new("map", "sequential"), |b| {
        b.iter(|| par::map_indexed_seq(N, job))
    });
    group.finish();
}

fn gram_rows(c: &mut Criterion) {
    const N: usize = 2000;
    const ROWS: usize = 16;
    let features: Vec<PauliVector> = generate_samples(FamilyTag::G, N, Orbit::Epsilon(0.5), 3)
        .unwrap()
        .into_iter()
        .map(|s| s.features)
        .collect();
    let gamma = 1.0;
    let row = |i: usize| -> Vec<f64> {
        features.iter().map(|x| rbf_kernel(&features[i], x, gamma)).collect()
    };
    let mut group = c.benchmark_group("gram_rows");
    group.bench_function(BenchmarkId::new("rows", "parallel"), |b| {
        b.iter(|| par::map_indexed(ROWS, row))
    });
    group.bench_function(BenchmarkId::new("rows", "sequential"), |b| {
        b.iter(|| par::map_indexed_seq(ROWS, row))
    });
    group.finish();
}

criterion_group!(benches, separable_batch, family_batch, gram_rows);
criterion_main!(benches);
