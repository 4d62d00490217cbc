use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ionpair::channels::{cycle_channel, storage_channel};
use ionpair::runner::{fit_gaussian_decay, run_decay_experiment, EstimationMode, Scenario};
use ionpair::tomo::{default_phase_grid, estimate_fmin_parity, linear_inversion, mle_reconstruct};
use ionpair::NoiseConfig;
use ionpair_bench::{short_scenario, stored_state, tomography_records, SEED};

fn channels(c: &mut Criterion) {
    let cfg = NoiseConfig::default().with_rate_ceilings();
    let state = stored_state();
    c.bench_function("storage_channel build", |b| b.iter(|| storage_channel(black_box(12.0), &cfg)));
    let ch = cycle_channel(12.0, &cfg, 0.003);
    c.bench_function("cycle_channel apply", |b| b.iter(|| ch.apply(black_box(&state))));
}

fn reconstruction(c: &mut Criterion) {
    let records = tomography_records(1000);
    c.bench_function("linear_inversion 1000 shots", |b| b.iter(|| linear_inversion(black_box(&records)).unwrap()));
    c.bench_function("mle_reconstruct 1000 shots", |b| b.iter(|| mle_reconstruct(black_box(&records)).unwrap()));
}

fn parity(c: &mut Criterion) {
    let state = stored_state();
    let cfg = NoiseConfig::default();
    let phases = default_phase_grid(8);
    c.bench_function("estimate_fmin_parity 8x1000", |b| {
        b.iter(|| estimate_fmin_parity(black_box(&state), &phases, 1000, 10.0, &cfg, SEED).unwrap())
    });
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("decay");
    group.sample_size(10);
    let parity = short_scenario();
    group.bench_function("parity 3 delays", |b| b.iter(|| run_decay_experiment(black_box(&parity)).unwrap()));
    let tomo = Scenario {
        mode: EstimationMode::FullTomography,
        ..short_scenario()
    };
    group.bench_function("tomography 3 delays", |b| b.iter(|| run_decay_experiment(black_box(&tomo)).unwrap()));
    group.finish();

    let curve = run_decay_experiment(&Scenario::default()).unwrap();
    c.bench_function("fit_gaussian_decay", |b| b.iter(|| fit_gaussian_decay(black_box(&curve)).unwrap()));
}

criterion_group!(benches, channels, reconstruction, parity, pipeline);
criterion_main!(benches);
