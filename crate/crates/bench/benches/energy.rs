use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use logsphere_bench::{planar_fixture, sphere_fixture};
use logsphere_core::{
    grad_log_energy_sphere, hamiltonian_w, log_energy_sphere, minimize_log_energy, MinimizeOptions,
    PotentialHandle,
};
use std::hint::black_box;

fn energies(c: &mut Criterion) {
    let mut group = c.benchmark_group("energy");
    for n in [50usize, 200, 800] {
        let cfg = sphere_fixture(n);
        group.bench_with_input(BenchmarkId::new("log_energy_sphere", n), &cfg, |b, cfg| {
            b.iter(|| log_energy_sphere(black_box(cfg)).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("grad_log_energy_sphere", n),
            &cfg,
            |b, cfg| b.iter(|| grad_log_energy_sphere(black_box(cfg)).unwrap()),
        );
        let planar = planar_fixture(n);
        group.bench_with_input(BenchmarkId::new("hamiltonian_w", n), &planar, |b, cfg| {
            b.iter(|| hamiltonian_w(black_box(cfg), &PotentialHandle::Canonical).unwrap())
        });
    }
    group.finish();
}

fn minimize(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimize");
    group.sample_size(10);
    for memory in [0usize, 10] {
        let opts = MinimizeOptions {
            restarts: 1,
            lbfgs_memory: memory,
            ..MinimizeOptions::default()
        };
        group.bench_with_input(
            BenchmarkId::new("n100_lbfgs_memory", memory),
            &opts,
            |b, opts| b.iter(|| minimize_log_energy(100, black_box(opts)).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, energies, minimize);
criterion_main!(benches);
