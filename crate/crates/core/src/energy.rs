//! Discrete logarithmic energies.
//!
//! All sums run over ordered pairs `i != j`, so every unordered pair is
//! counted twice. Pair terms are accumulated per outer index `i` with
//! compensated summation and the per-`i` partials are combined in index
//! order.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::{
    dist3, dot3, mobius_apply, MobiusMap, PlanarConfiguration, PlanarPoint, SphereConfiguration,
    COINCIDENCE_TOLERANCE,
};
use crate::potential::{transform_potential, zeta, EquilibriumData, PotentialHandle};
use crate::sum::KahanSum;
use crate::{Error, Result};

/// `-Σ_{i≠j} log ‖y_i - y_j‖` on raw vectors.
pub(crate) fn log_energy_vectors(points: &[[f64; 3]]) -> Result<f64> {
    let n = points.len();
    let mut total = KahanSum::new();
    for i in 0..n {
        let mut row = KahanSum::new();
        for j in (i + 1)..n {
            let d = dist3(&points[i], &points[j]);
            if !(d >= COINCIDENCE_TOLERANCE) {
                return Err(Error::CoincidentPoints { i, j });
            }
            row.add(-d.ln());
        }
        total.add(row.value());
    }
    Ok(2.0 * total.value())
}

pub fn log_energy_sphere(cfg: &SphereConfiguration) -> Result<f64> {
    log_energy_vectors(&cfg.vectors())
}

/// Energy and tangent gradient in one pass. `grad` must have the same length
/// as `points`.
pub(crate) fn energy_and_tangent_grad(points: &[[f64; 3]], grad: &mut [[f64; 3]]) -> Result<f64> {
    let n = points.len();
    for g in grad.iter_mut() {
        *g = [0.0; 3];
    }
    let mut total = KahanSum::new();
    for i in 0..n {
        let mut row = KahanSum::new();
        let pi = points[i];
        for j in (i + 1)..n {
            let pj = points[j];
            let diff = [pi[0] - pj[0], pi[1] - pj[1], pi[2] - pj[2]];
            let d2 = diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2];
            if !(d2 >= COINCIDENCE_TOLERANCE * COINCIDENCE_TOLERANCE) {
                return Err(Error::CoincidentPoints { i, j });
            }
            row.add(-0.5 * d2.ln());
            // d/dy_i of -2 log|y_i - y_j| (both orderings of the pair)
            let s = 2.0 / d2;
            for k in 0..3 {
                grad[i][k] -= s * diff[k];
                grad[j][k] += s * diff[k];
            }
        }
        total.add(row.value());
    }
    for (g, p) in grad.iter_mut().zip(points) {
        let radial = dot3(g, p);
        for k in 0..3 {
            g[k] -= radial * p[k];
        }
    }
    Ok(2.0 * total.value())
}

/// Gradient of the spherical energy projected onto each tangent plane.
pub fn grad_log_energy_sphere(cfg: &SphereConfiguration) -> Result<Vec<[f64; 3]>> {
    let points = cfg.vectors();
    let mut grad = vec![[0.0; 3]; points.len()];
    energy_and_tangent_grad(&points, &mut grad)?;
    Ok(grad)
}

fn planar_pair_term(points: &[PlanarPoint]) -> Result<f64> {
    let n = points.len();
    let mut total = KahanSum::new();
    for i in 0..n {
        let mut row = KahanSum::new();
        for j in (i + 1)..n {
            let d = points[i].dist(&points[j]);
            if !(d >= COINCIDENCE_TOLERANCE) {
                return Err(Error::CoincidentPoints { i, j });
            }
            row.add(-d.ln());
        }
        total.add(row.value());
    }
    Ok(2.0 * total.value())
}

fn weighted_sum<F: Fn(PlanarPoint) -> f64>(points: &[PlanarPoint], f: F) -> Result<f64> {
    let mut acc = KahanSum::new();
    for (index, &p) in points.iter().enumerate() {
        let v = f(p);
        if !v.is_finite() {
            return Err(Error::PoleOfPotential { index });
        }
        acc.add(v);
    }
    Ok(acc.value())
}

fn hamiltonian_points(points: &[PlanarPoint], v: &PotentialHandle) -> Result<f64> {
    let n = points.len() as f64;
    let pairs = planar_pair_term(points)?;
    let confinement = weighted_sum(points, |x| v.value(x))?;
    Ok(pairs + n * confinement)
}

/// Coulomb gas Hamiltonian `w_n = -Σ_{i≠j} log|x_i - x_j| + n Σ V(x_i)`.
pub fn hamiltonian_w(cfg: &PlanarConfiguration, v: &PotentialHandle) -> Result<f64> {
    hamiltonian_points(cfg.points(), v)
}

/// `w̄_n = -Σ_{i≠j} log|x_i - x_j| + (n - 1) Σ log(1 + |x_i|^2)`, the
/// log energy of the images on the radius-1/2 sphere.
pub fn hamiltonian_wbar(cfg: &PlanarConfiguration) -> Result<f64> {
    let points = cfg.points();
    let n = points.len() as f64;
    let pairs = planar_pair_term(points)?;
    let weights = weighted_sum(points, |x| x.norm_sq().ln_1p())?;
    Ok(pairs + (n - 1.0) * weights)
}

/// The splitting `w_n = n² I_V - (n/2) log n + (1/π) W(∇H'_n, 1) + 2n Σ ζ(x_i)`
/// evaluated term by term; the renormalized term is what remains of `w_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub n: usize,
    pub w_n: f64,
    /// `(1/π) W(∇H'_n, 1_{R^2})`.
    pub renormalized_term: f64,
    pub zeta_sum: f64,
    pub i_v_term: f64,
    pub log_term: f64,
}

impl SplittingReport {
    /// `W(∇H'_n, 1)` itself.
    pub fn renormalized_energy(&self) -> f64 {
        PI * self.renormalized_term
    }

    pub fn reassembled(&self) -> f64 {
        self.i_v_term + self.log_term + self.renormalized_term + self.zeta_sum
    }

    /// The sum of the four terms reproduces `w_n` up to the rounding of the
    /// additions, i.e. within a few ulp of the largest term.
    pub fn reassembles(&self) -> bool {
        let scale = self.w_n.abs()
            + self.i_v_term.abs()
            + self.log_term.abs()
            + self.renormalized_term.abs()
            + self.zeta_sum.abs();
        (self.reassembled() - self.w_n).abs() <= 4.0 * f64::EPSILON * scale
    }
}

pub fn splitting_report(
    cfg: &PlanarConfiguration,
    eq: &EquilibriumData,
) -> Result<SplittingReport> {
    let points = cfg.points();
    let n = points.len();
    let nf = n as f64;
    let w_n = hamiltonian_points(points, &eq.potential)?;
    let mut zetas = KahanSum::new();
    for &x in points {
        zetas.add(zeta(x, eq)?);
    }
    let zeta_sum = 2.0 * nf * zetas.value();
    let i_v_term = nf * nf * eq.i_v;
    let log_term = -0.5 * nf * nf.ln();
    let renormalized_term = w_n - i_v_term - log_term - zeta_sum;
    Ok(SplittingReport {
        n,
        w_n,
        renormalized_term,
        zeta_sum,
        i_v_term,
        log_term,
    })
}

/// Residual of the change of variables
/// `w_{n,V}(φ(y)) = w_{n,V_φ}(y) + Σ log(1 + |φ(y_i)|^2) - Σ log(1 + |y_i|^2)`,
/// each side evaluated independently. The identity relies on `φ` preserving
/// chordal distances, so it holds for maps induced by sphere rotations.
pub fn mobius_energy_identity_check(
    cfg_y: &PlanarConfiguration,
    phi: &MobiusMap,
    v: &PotentialHandle,
) -> Result<f64> {
    let ys = cfg_y.points();
    let xs = ys
        .iter()
        .map(|&y| mobius_apply(phi, y))
        .collect::<Result<Vec<_>>>()?;
    let lhs = hamiltonian_points(&xs, v)?;
    let v_phi = transform_potential(phi, v);
    let pulled = hamiltonian_points(ys, &v_phi)?;
    let image_weights = weighted_sum(&xs, |x| x.norm_sq().ln_1p())?;
    let source_weights = weighted_sum(ys, |y| y.norm_sq().ln_1p())?;
    let rhs = pulled + image_weights - source_weights;
    Ok((lhs - rhs).abs())
}
