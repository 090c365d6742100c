//! Identity suites run by `logsphere selftest`. Each suite reports the
//! largest residual it saw against a fixed tolerance.

use std::f64::consts::{LN_2, PI};

use logsphere_core::lattice::{chowla_selberg_residual_square, w_density_one};
use logsphere_core::{
    canonical_equilibrium, chordal_distance, chowla_selberg_check, grad_log_energy_sphere,
    hamiltonian_w, hamiltonian_wbar, log_energy_sphere, mobius_energy_identity_check,
    splitting_report, stereographic, w_lattice, LatticeShape, MobiusMap, PlanarConfiguration,
    PlanarPoint, PotentialHandle, SphereConfiguration,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteOutcome {
    fn new(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Self {
            name,
            residual,
            tolerance,
            passed: residual.is_finite() && residual < tolerance,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{:<16} residual={:.3e} tol={:.0e} {}",
            self.name,
            self.residual,
            self.tolerance,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

pub const SUITES: [&str; 7] = [
    "chordal_distance",
    "wminimizer",
    "mobius_chvar",
    "splitting",
    "chowla_selberg",
    "scaling_law",
    "gradient",
];

pub fn run_all(seed: u64) -> Vec<SuiteOutcome> {
    SUITES
        .iter()
        .map(|name| run_suite(name, seed).expect("known suite"))
        .collect()
}

pub fn run_suite(name: &str, seed: u64) -> Option<SuiteOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = match name {
        "chordal_distance" => SuiteOutcome::new("chordal_distance", chordal(&mut rng), 1e-13),
        "wminimizer" => SuiteOutcome::new("wminimizer", wminimizer(&mut rng), 1e-10),
        "mobius_chvar" => SuiteOutcome::new("mobius_chvar", chvar(&mut rng), 1e-10),
        "splitting" => SuiteOutcome::new("splitting", splitting(&mut rng), 1e-10),
        "chowla_selberg" => SuiteOutcome::new(
            "chowla_selberg",
            chowla_selberg_check().max(chowla_selberg_residual_square()),
            1e-12,
        ),
        "scaling_law" => SuiteOutcome::new("scaling_law", scaling(&mut rng), 1e-12),
        "gradient" => SuiteOutcome::new("gradient", gradient(&mut rng), 1e-5),
        _ => return None,
    };
    Some(outcome)
}

fn planar(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> PlanarConfiguration {
    let pts = (0..n)
        .map(|_| {
            PlanarPoint::new(
                scale * rng.random_range(-1.0..1.0),
                scale * rng.random_range(-1.0..1.0),
            )
        })
        .collect();
    PlanarConfiguration::new(pts).expect("random points are distinct")
}

fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..1.0);
    let a: f64 = rng.random_range(0.0..2.0 * PI);
    let s = (1.0 - z * z).sqrt();
    [s * a.cos(), s * a.sin(), z]
}

fn sphere(rng: &mut ChaCha8Rng, n: usize) -> SphereConfiguration {
    let v: Vec<[f64; 3]> = (0..n).map(|_| unit_vector(rng)).collect();
    SphereConfiguration::from_vectors(&v).expect("random points are distinct")
}

fn images(cfg: &PlanarConfiguration) -> Vec<[f64; 3]> {
    cfg.points()
        .iter()
        .map(|&x| stereographic(x).coords())
        .collect()
}

fn energy_of(v: &[[f64; 3]]) -> f64 {
    log_energy_sphere(&SphereConfiguration::from_vectors(v).expect("distinct")).expect("distinct")
}

fn chordal(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let s = 10f64.powf(rng.random_range(-2.0..2.0));
        let x = PlanarPoint::new(
            s * rng.random_range(-1.0..1.0),
            s * rng.random_range(-1.0..1.0),
        );
        let y = PlanarPoint::new(
            s * rng.random_range(-1.0..1.0),
            s * rng.random_range(-1.0..1.0),
        );
        let (a, b) = (stereographic(x).coords(), stereographic(y).coords());
        let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
        worst = worst.max((chordal_distance(x, y) - d).abs());
    }
    worst
}

/// `w̄_n = E(images) + n(n-1) log 2` and `w_n = E(images ∪ N) + n(n+1) log 2`.
fn wminimizer(rng: &mut ChaCha8Rng) -> f64 {
    let v = PotentialHandle::Canonical;
    let mut worst: f64 = 0.0;
    for n in 2..=12 {
        for _ in 0..5 {
            let cfg = planar(rng, n, 3.0);
            let nf = n as f64;
            let mut pts = images(&cfg);
            let wbar = hamiltonian_wbar(&cfg).expect("distinct");
            worst = worst.max((wbar - energy_of(&pts) - nf * (nf - 1.0) * LN_2).abs());
            pts.push([0.0, 0.0, 1.0]);
            let w = hamiltonian_w(&cfg, &v).expect("distinct");
            worst = worst.max((w - energy_of(&pts) - nf * (nf + 1.0) * LN_2).abs());
        }
    }
    worst
}

fn chvar(rng: &mut ChaCha8Rng) -> f64 {
    let v = PotentialHandle::Canonical;
    let mut worst: f64 = 0.0;
    for n in 2..=12 {
        for k in 0..5 {
            let cfg = planar(rng, n, 2.0);
            let phi = if k == 0 {
                MobiusMap::inversion()
            } else {
                MobiusMap::from_rotation(unit_vector(rng), rng.random_range(0.0..2.0 * PI))
                    .expect("unit axis")
            };
            match mobius_energy_identity_check(&cfg, &phi, &v) {
                Ok(r) => worst = worst.max(r),
                Err(logsphere_core::Error::PoleOfMap) => continue,
                Err(_) => return f64::INFINITY,
            }
        }
    }
    worst
}

/// Reassembly to rounding, plus invariance of the renormalized term under planar
/// rotations.
fn splitting(rng: &mut ChaCha8Rng) -> f64 {
    let eq = canonical_equilibrium();
    let mut worst: f64 = 0.0;
    for n in 2..=12 {
        let cfg = planar(rng, n, 2.0);
        let rep = splitting_report(&cfg, &eq).expect("canonical");
        if !rep.reassembles() {
            return f64::INFINITY;
        }
        let (s, c) = rng.random_range(0.0..2.0 * PI).sin_cos();
        let rotated = PlanarConfiguration::new(
            cfg.points()
                .iter()
                .map(|p| PlanarPoint::new(c * p.x1 - s * p.x2, s * p.x1 + c * p.x2))
                .collect(),
        )
        .expect("rotation keeps points distinct");
        let rot = splitting_report(&rotated, &eq).expect("canonical");
        worst = worst.max((rot.renormalized_term - rep.renormalized_term).abs());
    }
    worst
}

/// Relative deviation of `W` at density `2m` from the scaling law applied
/// to the value at `m`.
fn scaling(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let tau = Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(1.0..3.0));
        let m = 10f64.powf(rng.random_range(-2.0..2.0));
        let wm = w_lattice(&LatticeShape::from_tau(tau, m).expect("valid")).expect("valid");
        let w2m = w_lattice(&LatticeShape::from_tau(tau, 2.0 * m).expect("valid")).expect("valid");
        let w1 = wm / m + 0.5 * PI * m.ln();
        let predicted = 2.0 * m * (w1 - 0.5 * PI * (2.0 * m).ln());
        worst = worst.max((w2m - predicted).abs() / w2m.abs().max(1.0));
        let direct = m * (w_density_one(tau).expect("valid") - 0.5 * PI * m.ln());
        worst = worst.max((wm - direct).abs() / wm.abs().max(1.0));
    }
    worst
}

/// Relative error of the tangent gradient against central differences.
fn gradient(rng: &mut ChaCha8Rng) -> f64 {
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for n in [4usize, 8, 16] {
        let cfg = sphere(rng, n);
        let g = grad_log_energy_sphere(&cfg).expect("distinct");
        let pts = cfg.vectors();
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            for k in 0..3 {
                let mut plus = pts.clone();
                let mut minus = pts.clone();
                plus[i][k] += h;
                minus[i][k] -= h;
                let fd = (energy_of(&plus) - energy_of(&minus)) / (2.0 * h);
                num += (fd - g[i][k]).powi(2);
                den += g[i][k].powi(2);
            }
        }
        worst = worst.max((num / den).sqrt());
    }
    worst
}
