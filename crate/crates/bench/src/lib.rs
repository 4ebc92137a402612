//! Benchmark-only crate; see the `benches/` directory. Shared helpers
//! for the benchmark targets live here.

use bosonkit_core::matrix::ComplexMatrix;

/// A fixed seeded Ginibre draw so benches compare like with like.
pub fn bench_matrix(n: usize) -> ComplexMatrix {
    bosonkit_core::ensembles::sample_ginibre(n, 0.5, 0xB05E).expect("valid parameters")
}
