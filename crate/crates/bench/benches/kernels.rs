use std::f64::consts::FRAC_PI_2;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pbsi_core::interferometer::{SweepMode, System};
use pbsi_core::{
    amplitude_sum, beam_splitter, compose, intensity_sweep, phase_stage, roundtrip_oracle,
    sweep_1d, CavityParams, SweepGrid,
};

fn bench_compose(c: &mut Criterion) {
    let bs = beam_splitter();
    let theta = phase_stage(0.3, -0.3).unwrap();
    let theta_prime = phase_stage(-0.3, 0.3).unwrap();
    c.bench_function("compose ccd-mzi", |b| {
        b.iter(|| compose(black_box(&[bs, theta, bs, bs, theta_prime, bs])).unwrap())
    });
}

fn bench_amplitude_sum(c: &mut Criterion) {
    let params = CavityParams::with_reflectance(0.999).unwrap();
    c.bench_function("amplitude_sum n=5000", |b| {
        b.iter(|| amplitude_sum(black_box(FRAC_PI_2 + 1e-4), &params))
    });
    c.bench_function("roundtrip_oracle n=5000", |b| {
        b.iter(|| roundtrip_oracle(black_box(FRAC_PI_2 + 1e-4), &params).unwrap())
    });
}

fn bench_sweeps(c: &mut Criterion) {
    let params = CavityParams::with_reflectance(0.999).unwrap();
    let window = SweepGrid::centered(FRAC_PI_2, 5e-3, 2001).unwrap();
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    group.bench_function("cavity window 2001 pts", |b| {
        b.iter(|| intensity_sweep(black_box(window), &params))
    });
    let grid = SweepGrid::new(-6.3, 6.3, 4001).unwrap();
    group.bench_function("ccd antiphase 4001 pts", |b| {
        b.iter(|| sweep_1d(System::Ccd, SweepMode::Antiphase, black_box(grid)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_compose, bench_amplitude_sum, bench_sweeps);
criterion_main!(benches);
