use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pdm_osc_bench::params;
use pdm_osc_core::oscillator::{ode_residual, QuantumState};
use pdm_osc_core::specfun::{erf, erfcx, integrate, jacobi_p, JacobiParams, QuadratureSpec};

fn special_functions(c: &mut Criterion) {
    c.bench_function("erf", |b| b.iter(|| erf(black_box(1.3))));
    c.bench_function("erfcx large", |b| b.iter(|| erfcx(black_box(40.0))));
    let jp = JacobiParams::new(1.0, 3.2, 20);
    c.bench_function("jacobi n=20", |b| b.iter(|| jacobi_p(&jp, black_box(0.3))));
    let spec = QuadratureSpec::on(0.0, 5.0).unwrap();
    c.bench_function("gaussian quadrature", |b| b.iter(|| integrate(|x: f64| (-x * x).exp(), &spec)));
}

fn radial(c: &mut Criterion) {
    let p = params(-0.5);
    let s = QuantumState::new(&p, 3, 2);
    c.bench_function("ode residual", |b| b.iter(|| ode_residual(&p, &s, black_box(0.7))));
}

criterion_group!(benches, special_functions, radial);
criterion_main!(benches);
