use criterion::{criterion_group, criterion_main, Criterion};
use pdm_osc_bench::temperature_sweep;
use pdm_osc_core::thermo::{evaluate, evaluate_grid};
use pdm_osc_core::Strategy;

fn strategies(c: &mut Criterion) {
    let input = temperature_sweep(-0.3, 1, 2)[1];
    for (name, strategy) in [
        ("direct", Strategy::DirectSum),
        ("closed form", Strategy::PaperClosedForm),
        ("poisson", Strategy::PoissonPipeline),
    ] {
        let input = input.with_strategy(strategy);
        c.bench_function(name, |b| b.iter(|| evaluate(&input)));
    }
}

fn sweep(c: &mut Criterion) {
    let inputs = temperature_sweep(-0.3, 1, 500);
    c.bench_function("direct sweep 500", |b| b.iter(|| evaluate_grid(&inputs)));
}

criterion_group!(benches, strategies, sweep);
criterion_main!(benches);
