// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_4;

use criterion::{criterion_group, criterion_main, Criterion};
use thermowit_core::tavis_cummings::{
    build_tc_model, coherent_input_state, memory_fixed_point, run_trajectory, FixedPointOptions,
};

fn fixed_point(c: &mut Criterion) {
    let opts = FixedPointOptions { max_leakage: 1.0, ..Default::default() };
    let rho = coherent_input_state(0.3, 1.0).unwrap();
    let mut group = c.benchmark_group("tc");
    group.sample_size(10);
    for n_max in [8usize, 16] {
        let model = build_tc_model(1.0, 1.0, n_max, 0.3).unwrap();
        group.bench_function(format!("fixed_point/{n_max}"), |b| {
            b.iter(|| memory_fixed_point(&model, &rho, FRAC_PI_4, &opts).unwrap())
        });
    }
    let model = build_tc_model(1.0, 1.0, 8, 0.3).unwrap();
    group.bench_function("trajectory/8x200", |b| {
        b.iter(|| run_trajectory(&model, &rho, FRAC_PI_4, 200, &opts).unwrap())
    });
    group.finish();
}

criterion_group!(benches, fixed_point);
criterion_main!(benches);
