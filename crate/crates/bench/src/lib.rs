//! Benchmark groups for the table, the residue engine and the series layer.
//! Each benchmark builds fresh state so memoisation does not carry over
//! between iterations.

use std::hint::black_box;

use bessel_tr::bessel::UTable;
use bessel_tr::constraints::{evolve, virasoro_annihilation_check};
use bessel_tr::series::free_energy;
use bessel_tr::tr::{SpectralCurve, TrEngine};
use criterion::{BenchmarkId, Criterion};

pub fn u_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("u_table");
    for chi in [6u32, 8, 10] {
        group.bench_with_input(BenchmarkId::from_parameter(chi), &chi, |b, &chi| {
            b.iter(|| UTable::new().entries(black_box(chi), None))
        });
    }
    group.finish();
}

pub fn residue_engine(c: &mut Criterion) {
    let mut group = c.benchmark_group("residue_engine");
    group.sample_size(20);
    for (name, curve) in [("bessel", SpectralCurve::bessel()), ("airy", SpectralCurve::airy())] {
        for chi in [4u32, 6] {
            group.bench_with_input(BenchmarkId::new(name, chi), &chi, |b, &chi| {
                b.iter(|| TrEngine::new(curve.clone()).omega_up_to(black_box(chi)).unwrap())
            });
        }
    }
    group.finish();
}

pub fn series(c: &mut Criterion) {
    let mut group = c.benchmark_group("series");
    group.sample_size(20);
    for order in [6u32, 10] {
        group.bench_with_input(BenchmarkId::new("exp_free_energy", order), &order, |b, &order| {
            b.iter(|| free_energy(&UTable::new(), black_box(order)).exp_truncated().unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cut_and_join_flow", order), &order, |b, &order| {
            b.iter(|| evolve(black_box(order)))
        });
    }
    let z = free_energy(&UTable::new(), 10).exp_truncated().unwrap();
    group.bench_function("virasoro_m4_n10", |b| b.iter(|| virasoro_annihilation_check(black_box(&z), 4)));
    group.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    u_table(c);
    residue_engine(c);
    series(c);
}
