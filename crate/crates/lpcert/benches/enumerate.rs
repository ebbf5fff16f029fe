//! Vertex enumeration: rayon-parallel vs sequential on the same instances.
//!
//! Run with `cargo bench -p lpcert`; the parallel benchmarks disappear under
//! `--no-default-features`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpcert::{enumerate_vertices_seq, Matrix, MixedLp, Rational, Vector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[cfg(feature = "parallel")]
use lpcert::enumerate_vertices_par;

const CAP: u128 = 50_000_000;

/// Random all-inequality instance with rank n and a nonempty region around
/// the origin (rhs <= 0), so a realistic share of subsets pass feasibility.
fn instance(n: usize, m: usize, seed: u64) -> MixedLp {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rows: Vec<Vector> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vector = (0..n)
            .map(|_| Rational::from_int(rng.gen_range(-4..=4)))
            .collect();
        if i < n {
            row[i] = Rational::from_int(rng.gen_range(1..=4));
        }
        rows.push(row);
    }
    let rhs: Vector = (0..m)
        .map(|_| Rational::from_int(rng.gen_range(-6..=-1)))
        .collect();
    let cost: Vector = (0..n)
        .map(|_| Rational::from_int(rng.gen_range(-3..=3)))
        .collect();
    MixedLp::all_inequality(Matrix::from_rows(rows), rhs, cost).unwrap()
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_vertices");
    group.sample_size(10);
    for (n, m) in [(4usize, 14usize), (5, 18)] {
        let lp = instance(n, m, 42);
        let label = format!("{m}c{n}");
        group.bench_with_input(BenchmarkId::new("sequential", &label), &lp, |b, lp| {
            b.iter(|| enumerate_vertices_seq(lp, CAP).unwrap());
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", &label), &lp, |b, lp| {
            b.iter(|| enumerate_vertices_par(lp, CAP).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_enumeration);
criterion_main!(benches);
