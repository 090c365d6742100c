#![allow(dead_code)]

use logsphere_core::{PlanarConfiguration, PlanarPoint, SphereConfiguration};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre on [a, b] split into `panels` pieces.
pub fn composite_gl<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    rule: &[(f64, f64)],
) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for &(x, w) in rule {
            total += 0.5 * h * w * f(lo + 0.5 * h * (x + 1.0));
        }
    }
    total
}

pub fn random_planar(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> PlanarConfiguration {
    let pts = (0..n)
        .map(|_| {
            PlanarPoint::new(
                scale * rng.random_range(-1.0..1.0),
                scale * rng.random_range(-1.0..1.0),
            )
        })
        .collect();
    PlanarConfiguration::new(pts).unwrap()
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r > 0.1 && r <= 1.0 {
            return [v[0] / r, v[1] / r, v[2] / r];
        }
    }
}

pub fn random_sphere(rng: &mut ChaCha8Rng, n: usize) -> SphereConfiguration {
    let v: Vec<[f64; 3]> = (0..n).map(|_| random_unit_vector(rng)).collect();
    SphereConfiguration::from_vectors(&v).unwrap()
}

/// `-Σ_{i≠j} log|p_i - p_j|` by a plain double loop over ordered pairs.
pub fn naive_log_energy(points: &[[f64; 3]]) -> f64 {
    let mut e = 0.0;
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i != j {
                let d =
                    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
                e -= d.ln();
            }
        }
    }
    e
}

pub fn octahedron() -> Vec<[f64; 3]> {
    vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ]
}

pub fn icosahedron() -> Vec<[f64; 3]> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let r = (1.0 + phi * phi).sqrt();
    let mut v = Vec::new();
    for &a in &[-1.0, 1.0] {
        for &b in &[-phi, phi] {
            v.push([0.0, a / r, b / r]);
            v.push([a / r, b / r, 0.0]);
            v.push([b / r, 0.0, a / r]);
        }
    }
    v
}
