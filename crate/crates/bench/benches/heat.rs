// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use thermowit_bench::heat_fixture;
use thermowit_core::heat::oracle::{heat_bounds_oracle, OracleOptions};
use thermowit_core::heat_bounds;
use thermowit_core::witness::isotropic::{isotropic_sweep, lambda_crt};

fn bounds(c: &mut Criterion) {
    let mut group = c.benchmark_group("heat_bounds");
    for dim in [2usize, 4, 9, 25] {
        let (rho, h) = heat_fixture(dim, 7);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &dim, |b, _| {
            b.iter(|| heat_bounds(black_box(&rho), black_box(&h), 1.0).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let (rho, h) = heat_fixture(3, 7);
    let opts = OracleOptions { samples: 200, ..Default::default() };
    c.bench_function("heat_bounds_oracle/3", |b| b.iter(|| heat_bounds_oracle(&rho, &h, 1.0, &opts).unwrap()));
}

fn witness(c: &mut Criterion) {
    c.bench_function("lambda_crt/7", |b| b.iter(|| lambda_crt(black_box(7)).unwrap()));
    let mut group = c.benchmark_group("isotropic_sweep");
    group.sample_size(10);
    group.bench_function("d2_400", |b| b.iter(|| isotropic_sweep(2, 0.5, 400).unwrap()));
    group.finish();
}

criterion_group!(benches, bounds, oracle, witness);
criterion_main!(benches);
