use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nrc_bench::random_matrix;
use nrc_core::linalg::{hnf_full, snf_full};

fn hnf(c: &mut Criterion) {
    let mut g = c.benchmark_group("hnf");
    for n in [4usize, 8, 12] {
        let m = random_matrix(n, n + 2, 1000, n as u64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| hnf_full(black_box(m))));
    }
    g.finish();
}

fn snf(c: &mut Criterion) {
    let mut g = c.benchmark_group("snf");
    for n in [4usize, 8, 12] {
        let m = random_matrix(n, n, 1000, 100 + n as u64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| snf_full(black_box(m))));
    }
    g.finish();
}

criterion_group!(benches, hnf, snf);
criterion_main!(benches);
