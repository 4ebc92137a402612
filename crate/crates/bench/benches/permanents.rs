use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use bosonkit_bench::bench_matrix;

/// Naive n! expansion against the 2^n algorithms at the sizes where all
/// are feasible, plus Ryser at production sizes.
fn permanent_algorithms(c: &mut Criterion) {
    let mut group = c.benchmark_group("permanent");
    for n in [5usize, 7, 9] {
        let a = bench_matrix(n);
        group.bench_with_input(BenchmarkId::new("naive", n), &a, |b, a| {
            b.iter(|| black_box(a.permanent_naive().unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("ryser", n), &a, |b, a| {
            b.iter(|| black_box(a.permanent_ryser().unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("glynn", n), &a, |b, a| {
            b.iter(|| black_box(a.permanent_glynn().unwrap()))
        });
    }
    group.finish();
}

fn ryser_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("ryser_scaling");
    group.sample_size(10);
    for n in [12usize, 16, 20] {
        let a = bench_matrix(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| black_box(a.permanent_ryser().unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, permanent_algorithms, ryser_scaling);
criterion_main!(benches);
