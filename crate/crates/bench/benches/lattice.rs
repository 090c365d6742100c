use criterion::{criterion_group, criterion_main, Criterion};
use logsphere_core::lattice::tau_triangular;
use logsphere_core::{
    dedekind_eta, minimality_scan, reduce_lattice, w_lattice, BravaisLattice, LatticeShape,
};
use num_complex::Complex64;
use std::hint::black_box;

fn lattice(c: &mut Criterion) {
    let tau = tau_triangular();
    c.bench_function("dedekind_eta/tri", |b| {
        b.iter(|| dedekind_eta(black_box(tau)).unwrap())
    });
    let high = Complex64::new(0.1, 0.87);
    c.bench_function("dedekind_eta/near_boundary", |b| {
        b.iter(|| dedekind_eta(black_box(high)).unwrap())
    });
    let shape = LatticeShape::triangular(1.0).unwrap();
    c.bench_function("w_lattice/tri", |b| {
        b.iter(|| w_lattice(black_box(&shape)).unwrap())
    });
    let skew = BravaisLattice::new([3.1, 0.4], [17.2, 2.5]).unwrap();
    c.bench_function("reduce_lattice/skew", |b| {
        b.iter(|| reduce_lattice(black_box(&skew)).unwrap())
    });
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    group.bench_function("minimality_scan/64x64", |b| {
        b.iter(|| minimality_scan(64, 64, 3.0).unwrap())
    });
    group.finish();
}

criterion_group!(benches, lattice);
criterion_main!(benches);
