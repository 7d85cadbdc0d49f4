use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qagt_bench::fixed_point;
use qagt_core::dvir::gram::gram_matrix;
use qagt_core::dvir::gaiotto_coeffs;
use qagt_core::integral::iterated_residue;
use qagt_core::nekrasov::{recursion_residual, z_level_symbolic};
use qagt_core::Partition;

fn instanton_levels(c: &mut Criterion) {
    let pt = fixed_point();
    let mut group = c.benchmark_group("z_level_symbolic");
    group.sample_size(10);
    for n in 1..=4 {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| z_level_symbolic(black_box(n), &pt).unwrap())
        });
    }
    group.finish();
}

fn recursion(c: &mut Criterion) {
    let pt = fixed_point();
    let mut group = c.benchmark_group("recursion_residual");
    group.sample_size(10);
    for n in 1..=3 {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| recursion_residual(black_box(n), &pt).unwrap())
        });
    }
    group.finish();
}

fn residues(c: &mut Criterion) {
    let pt = fixed_point();
    let cases = [
        (Partition::new(vec![1]).unwrap(), Partition::new(vec![1]).unwrap()),
        (Partition::new(vec![2, 1]).unwrap(), Partition::new(vec![1]).unwrap()),
        (Partition::new(vec![2]).unwrap(), Partition::new(vec![1, 1]).unwrap()),
    ];
    let mut group = c.benchmark_group("iterated_residue");
    for (l, m) in &cases {
        group.bench_function(format!("{l}|{m}"), |b| b.iter(|| iterated_residue(black_box(l), m, &pt).unwrap()));
    }
    group.finish();
}

fn verma(c: &mut Criterion) {
    let pt = fixed_point();
    let mut group = c.benchmark_group("gram_matrix");
    group.sample_size(10);
    for n in 1..=4 {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| gram_matrix(black_box(n), &pt).unwrap())
        });
    }
    group.finish();
    c.bench_function("gaiotto_coeffs/3", |b| b.iter(|| gaiotto_coeffs(black_box(3), &pt).unwrap()));
}

criterion_group!(benches, instanton_levels, recursion, residues, verma);
criterion_main!(benches);
