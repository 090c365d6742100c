//! Renormalized energy of Bravais lattices.
//!
//! For a lattice of density `1/(2π)` with shape `τ = a + ib` the energy is
//! `W = -1/2 log(√(2π b) |η(τ)|^2)`. Other densities follow from the
//! scaling law `W_m = m (W_1 - (π/2) log m)`, which at `m = 1/(2π)` gives
//! `W_1 = 2π W_{1/2π} - (π/2) log 2π`.

mod special;

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use special::{dedekind_eta, gamma_fn, ETA_MAX_TERMS, ETA_TRUNCATION};

const DOMAIN_SLACK: f64 = 1e-12;

/// `1/2 + i √3/2`.
pub fn tau_triangular() -> Complex64 {
    Complex64::new(0.5, 3f64.sqrt() / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BravaisLattice {
    pub u: [f64; 2],
    pub v: [f64; 2],
}

impl BravaisLattice {
    pub fn new(u: [f64; 2], v: [f64; 2]) -> Result<Self> {
        let lattice = Self { u, v };
        if !(lattice.det().abs() > 1e-14) || !lattice.det().is_finite() {
            return Err(Error::DegenerateBasis);
        }
        Ok(lattice)
    }

    /// `√(2/(m√3)) (Z(1,0) ⊕ Z(1/2, √3/2))`.
    pub fn triangular(density: f64) -> Result<Self> {
        if !(density > 0.0) {
            return Err(Error::InvalidInput("density must be positive".into()));
        }
        let s = (2.0 / (density * 3f64.sqrt())).sqrt();
        Self::new([s, 0.0], [0.5 * s, 3f64.sqrt() / 2.0 * s])
    }

    pub fn square(density: f64) -> Result<Self> {
        if !(density > 0.0) {
            return Err(Error::InvalidInput("density must be positive".into()));
        }
        let s = 1.0 / density.sqrt();
        Self::new([s, 0.0], [0.0, s])
    }

    pub fn det(&self) -> f64 {
        self.u[0] * self.v[1] - self.u[1] * self.v[0]
    }

    pub fn density(&self) -> f64 {
        1.0 / self.det().abs()
    }
}

/// Shape `τ` in the fundamental domain `|Re τ| ≤ 1/2, |τ| ≥ 1` (boundary
/// ties resolved to `Re τ ≥ 0`) and density `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeShape {
    pub tau: Complex64,
    pub density: f64,
}

impl LatticeShape {
    /// Reduces an arbitrary upper-half-plane `τ` into the fundamental domain.
    pub fn from_tau(tau: Complex64, density: f64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.is_finite() {
            return Err(Error::DomainError(format!(
                "τ must have Im τ > 0, got {tau}"
            )));
        }
        if !(density > 0.0) || !density.is_finite() {
            return Err(Error::DomainError(format!(
                "density must be positive, got {density}"
            )));
        }
        Ok(Self {
            tau: to_fundamental_domain(tau),
            density,
        })
    }

    pub fn triangular(density: f64) -> Result<Self> {
        Self::from_tau(tau_triangular(), density)
    }

    pub fn is_reduced(&self) -> bool {
        self.tau.im > 0.0
            && self.tau.re.abs() <= 0.5 + DOMAIN_SLACK
            && self.tau.norm() >= 1.0 - DOMAIN_SLACK
    }
}

fn to_fundamental_domain(mut tau: Complex64) -> Complex64 {
    for _ in 0..10_000 {
        tau.re -= tau.re.round();
        if tau.norm_sqr() < 1.0 - DOMAIN_SLACK {
            tau = -1.0 / tau;
        } else {
            break;
        }
    }
    if (tau.re + 0.5).abs() <= DOMAIN_SLACK {
        tau.re += 1.0;
    }
    if tau.re < 0.0 && (tau.norm_sqr() - 1.0).abs() <= DOMAIN_SLACK {
        // -1/τ = -conj(τ) on the unit circle
        tau = -1.0 / tau;
    }
    tau
}

/// Lagrange–Gauss reduction followed by `τ = v / u` for the reduced basis
/// `|u| ≤ |v|`, oriented so that `Im τ > 0`.
pub fn reduce_lattice(lattice: &BravaisLattice) -> Result<LatticeShape> {
    if !(lattice.det().abs() > 1e-14) {
        return Err(Error::DegenerateBasis);
    }
    let mut u = Complex64::new(lattice.u[0], lattice.u[1]);
    let mut v = Complex64::new(lattice.v[0], lattice.v[1]);
    if u.norm_sqr() > v.norm_sqr() {
        std::mem::swap(&mut u, &mut v);
    }
    for _ in 0..10_000 {
        let mu = ((u.conj() * v).re / u.norm_sqr()).round();
        v -= u * mu;
        if v.norm_sqr() < u.norm_sqr() {
            std::mem::swap(&mut u, &mut v);
        } else {
            break;
        }
    }
    let mut tau = v / u;
    if tau.im < 0.0 {
        tau = -tau;
    }
    LatticeShape::from_tau(tau, lattice.density())
}

/// `W` at density `1/(2π)`: `-1/2 log(√(2π Im τ) |η(τ)|^2)`.
pub fn w_anchor(tau: Complex64) -> Result<f64> {
    let eta = dedekind_eta(tau)?;
    Ok(-0.5 * ((2.0 * PI * tau.im).sqrt() * eta.norm_sqr()).ln())
}

/// `W` at density one.
pub fn w_density_one(tau: Complex64) -> Result<f64> {
    Ok(2.0 * PI * w_anchor(tau)? - 0.5 * PI * (2.0 * PI).ln())
}

/// `W_m = m (W_1 - (π/2) log m)`.
pub fn scale_w(w1: f64, density: f64) -> f64 {
    density * (w1 - 0.5 * PI * density.ln())
}

pub fn w_lattice(shape: &LatticeShape) -> Result<f64> {
    if !(shape.tau.im > 0.0) {
        return Err(Error::DomainError(
            "shape is not in the upper half plane".into(),
        ));
    }
    if !(shape.density > 0.0) {
        return Err(Error::DomainError("density must be positive".into()));
    }
    Ok(scale_w(w_density_one(shape.tau)?, shape.density))
}

/// `π log(2√2 π / (√3 Γ(1/3)^3))`, the density-one triangular energy from
/// the Chowla–Selberg evaluation of `|η(τ_tri)|`.
pub fn w_triangular_closed_form() -> f64 {
    let g = gamma_fn(1.0 / 3.0).expect("1/3 > 0");
    PI * (2.0 * 2f64.sqrt() * PI / (3f64.sqrt() * g.powi(3))).ln()
}

/// `Γ(1/3)^6 √3 / (16 π^4)`.
pub fn eta_tri_fourth_power_closed_form() -> f64 {
    let g = gamma_fn(1.0 / 3.0).expect("1/3 > 0");
    g.powi(6) * 3f64.sqrt() / (16.0 * PI.powi(4))
}

/// `| |η(τ_tri)|^4 - Γ(1/3)^6 √3 / (16 π^4) |`.
pub fn chowla_selberg_check() -> f64 {
    chowla_selberg_residual(tau_triangular())
}

/// Same comparison at an arbitrary `τ`; only sharp at `τ_tri`.
pub fn chowla_selberg_residual(tau: Complex64) -> f64 {
    let eta = dedekind_eta(tau).expect("Im τ > 0");
    (eta.norm_sqr().powi(2) - eta_tri_fourth_power_closed_form()).abs()
}

/// The `D = -4` instance: `|η(i)| = Γ(1/4) / (2 π^{3/4})`.
pub fn chowla_selberg_residual_square() -> f64 {
    let eta = dedekind_eta(Complex64::new(0.0, 1.0)).expect("Im i > 0");
    let closed = gamma_fn(0.25).expect("1/4 > 0") / (2.0 * PI.powf(0.75));
    (eta.norm() - closed).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaperConstants {
    /// Conjectured order-`n` constant `2 log 2 + 1/2 log(2/3) + 3 log(√π / Γ(1/3))`.
    pub c_bhs: f64,
    /// `W(Λ_1)` for the density-one triangular lattice, from the eta formula.
    pub w_tri_density1: f64,
    pub rsz_a: f64,
    pub rsz_b: f64,
    /// Lower bound on `min W` over density-one configurations.
    pub rsz_minw_lower: f64,
    /// Lower bound on the order-`n` constant.
    pub rsz_c_lower: f64,
}

pub fn paper_constants() -> PaperConstants {
    let g = gamma_fn(1.0 / 3.0).expect("1/3 > 0");
    let c_bhs = 2.0 * LN_2 + 0.5 * (2.0f64 / 3.0).ln() + 3.0 * (PI.sqrt() / g).ln();
    let w_tri_density1 =
        w_lattice(&LatticeShape::triangular(1.0).expect("valid")).expect("valid shape");
    let s2pi = (2.0 * PI).sqrt();
    let s27 = 27f64.sqrt();
    let outer = (2.0 * PI + s27).sqrt();
    let rsz_a = 2.0 * s2pi / s27 * (outer + s2pi);
    let rsz_b = (outer - s2pi) / (outer + s2pi);
    let damp = (1.0 - (-rsz_a).exp()).powf(rsz_b);
    PaperConstants {
        c_bhs,
        w_tri_density1,
        rsz_a,
        rsz_b,
        rsz_minw_lower: -0.5 * PI * (2.0 * PI * PI * damp).ln(),
        rsz_c_lower: -0.5 * (0.5 * PI * damp).ln(),
    }
}

/// Order-`n` constant implied by a value of `min W` at density one:
/// `(1/π) min W + (log π)/2 + log 2`.
pub fn order_n_constant(min_w1: f64) -> f64 {
    min_w1 / PI + 0.5 * PI.ln() + LN_2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    /// Grid argmin, folded to `Re τ ≥ 0`.
    pub argmin: Complex64,
    /// `(row, column)` of the argmin before folding; rows index `Im τ`.
    pub argmin_index: (usize, usize),
    pub min_value: f64,
    /// Gap to the best node that is neither adjacent to the argmin nor to
    /// its mirror image.
    pub margin: f64,
    pub re_nodes: Vec<f64>,
    pub im_nodes: Vec<f64>,
    /// `W_1` per node, `None` outside the fundamental domain.
    pub values: Vec<Vec<Option<f64>>>,
}

impl ScanResult {
    pub fn node(&self, row: usize, col: usize) -> Complex64 {
        Complex64::new(self.re_nodes[col], self.im_nodes[row])
    }

    /// Grid node closest to `tau` among nodes inside the domain.
    pub fn nearest_node(&self, tau: Complex64) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_d = f64::INFINITY;
        for (r, row) in self.values.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if v.is_some() {
                    let d = (self.node(r, c) - tau).norm();
                    if d < best_d {
                        best_d = d;
                        best = (r, c);
                    }
                }
            }
        }
        best
    }
}

/// Evaluates `W_1` on a grid over `|Re τ| ≤ 1/2, |τ| ≥ 1, Im τ ≤ im_max`.
pub fn minimality_scan(grid_re: usize, grid_im: usize, im_max: f64) -> Result<ScanResult> {
    if grid_re < 32 || grid_im < 32 {
        return Err(Error::InvalidInput(
            "scan grid must be at least 32 x 32".into(),
        ));
    }
    if !(im_max >= 2.0) {
        return Err(Error::InvalidInput("im_max must be at least 2".into()));
    }
    let denom = 2.0 * (grid_re - 1) as f64;
    // Exactly antisymmetric nodes: re[k] = -re[grid_re - 1 - k].
    let re_nodes: Vec<f64> = (0..grid_re)
        .map(|k| (2.0 * k as f64 - (grid_re - 1) as f64) / denom)
        .collect();
    let im_lo = 3f64.sqrt() / 2.0;
    let im_nodes: Vec<f64> = (0..grid_im)
        .map(|k| im_lo + (im_max - im_lo) * k as f64 / (grid_im - 1) as f64)
        .collect();
    let values: Vec<Vec<Option<f64>>> = im_nodes
        .par_iter()
        .map(|&im| {
            re_nodes
                .iter()
                .map(|&re| {
                    let tau = Complex64::new(re, im);
                    if tau.norm_sqr() >= 1.0 - DOMAIN_SLACK {
                        Some(w_density_one(tau).expect("Im τ > 0"))
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();

    let mut best: Option<(usize, usize, f64)> = None;
    for (r, row) in values.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if let Some(v) = *v {
                if best.is_none_or(|(_, _, b)| v < b) {
                    best = Some((r, c, v));
                }
            }
        }
    }
    let (br, bc, min_value) = best.ok_or_else(|| Error::InvalidInput("empty scan grid".into()))?;
    let mirror = grid_re - 1 - bc;
    let near =
        |r: usize, c: usize, rr: usize, cc: usize| r.abs_diff(rr) <= 1 && c.abs_diff(cc) <= 1;
    let mut second = f64::INFINITY;
    for (r, row) in values.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if let Some(v) = *v {
                if !near(r, c, br, bc) && !near(r, c, br, mirror) {
                    second = second.min(v);
                }
            }
        }
    }
    let argmin = Complex64::new(re_nodes[bc].abs(), im_nodes[br]);
    Ok(ScanResult {
        argmin,
        argmin_index: (br, bc),
        min_value,
        margin: second - min_value,
        re_nodes,
        im_nodes,
        values,
    })
}
