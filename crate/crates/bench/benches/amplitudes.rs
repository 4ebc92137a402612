use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use bosonkit_core::ensembles::sample_haar;
use bosonkit_core::fock::{
    amplitude_fock, amplitude_fock_contour, amplitude_fock_oracle, OccupationVector,
};
use bosonkit_core::moments::moment6_exact;

fn amplitude_paths(c: &mut Criterion) {
    let u = sample_haar(3, 1).unwrap();
    let n = OccupationVector::new(vec![2, 1, 0]);
    let m = OccupationVector::new(vec![1, 1, 1]);
    let mut group = c.benchmark_group("amplitude_m3_n3");
    group.bench_function("permanent", |b| {
        b.iter(|| black_box(amplitude_fock(&u, &n, &m).unwrap()))
    });
    group.bench_function("oracle", |b| {
        b.iter(|| black_box(amplitude_fock_oracle(&u, &n, &m).unwrap()))
    });
    group.sample_size(20);
    group.bench_function("contour", |b| {
        b.iter(|| black_box(amplitude_fock_contour(&u, &n, &m).unwrap()))
    });
    group.finish();
}

fn third_moment(c: &mut Criterion) {
    let mut group = c.benchmark_group("moment6");
    group.sample_size(10);
    for n in [10u32, 16] {
        group.bench_function(format!("N{n}"), |b| {
            b.iter(|| black_box(moment6_exact(n).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, amplitude_paths, third_moment);
criterion_main!(benches);
