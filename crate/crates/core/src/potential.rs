//! External potentials and their equilibrium measures.
//!
//! The canonical potential is `V(x) = log(1 + |x|^2)`. Its equilibrium
//! measure is the pull-back of the uniform measure on the sphere,
//! `dμ_V = dx / (π (1 + |x|^2)^2)`, supported on the whole plane, so the
//! Frostman inequalities are equalities everywhere and `ζ ≡ 0`.
//!
//! Möbius images `V_φ(x) = V(φ(x)) - log(1 + |φ(x)|^2) + log(1 + |x|^2)`
//! are supported as potentials for any map; equilibrium data is only
//! provided when every map in the chain is a sphere rotation, in which case
//! the density follows from
//! `m_{V_φ}(x) = m_V(φ(x)) (1 + |φ(x)|^2)^2 / (1 + |x|^2)^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::{mobius_apply, MobiusMap, PlanarPoint};
use crate::quadrature::{integrate, integrate_half_line, QuadOptions};
use crate::{Error, Result};

const UNITARY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PotentialHandle {
    Canonical,
    MobiusTransformed {
        base: Box<PotentialHandle>,
        phi: MobiusMap,
    },
}

impl PotentialHandle {
    /// `V(x)`. At the pole `-d/c` of a transformed potential the value is
    /// the lim inf, `log(1 + |x|^2)` plus the base potential's weak-growth
    /// limit.
    pub fn value(&self, x: PlanarPoint) -> f64 {
        match self {
            PotentialHandle::Canonical => x.norm_sq().ln_1p(),
            PotentialHandle::MobiusTransformed { base, phi } => {
                if phi.is_pole(x) {
                    return base.growth_liminf() + x.norm_sq().ln_1p();
                }
                let y = mobius_apply(phi, x).expect("pole handled above");
                base.value(y) - y.norm_sq().ln_1p() + x.norm_sq().ln_1p()
            }
        }
    }

    /// `liminf_{|x| -> ∞} {V(x) - log(1 + |x|^2)}`, the value of the
    /// transported sphere potential at the north pole.
    pub fn growth_liminf(&self) -> f64 {
        match self {
            PotentialHandle::Canonical => 0.0,
            PotentialHandle::MobiusTransformed { base, phi } => match phi.image_of_infinity() {
                None => base.growth_liminf(),
                Some(w) => base.value(w) - w.norm_sq().ln_1p(),
            },
        }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self, PotentialHandle::Canonical)
    }

    /// True when the potential is the canonical one composed with sphere
    /// rotations only.
    pub fn is_rotation_of_canonical(&self) -> bool {
        match self {
            PotentialHandle::Canonical => true,
            PotentialHandle::MobiusTransformed { base, phi } => {
                phi.is_unitary(UNITARY_TOLERANCE) && base.is_rotation_of_canonical()
            }
        }
    }

    /// Density of the equilibrium measure transported to the sphere, i.e.
    /// `m_V(x) (1 + |x|^2)^2`; `None` stands for the north pole.
    fn sphere_density(&self, x: Option<PlanarPoint>) -> f64 {
        match self {
            PotentialHandle::Canonical => 1.0 / PI,
            PotentialHandle::MobiusTransformed { base, phi } => match x {
                Some(x) if phi.is_pole(x) => base.sphere_density(None),
                Some(x) => base.sphere_density(Some(mobius_apply(phi, x).expect("not a pole"))),
                None => base.sphere_density(phi.image_of_infinity()),
            },
        }
    }
}

/// The potential `V_φ` whose Coulomb gas is the `φ`-pullback of the one
/// for `V`.
pub fn transform_potential(phi: &MobiusMap, v: &PotentialHandle) -> PotentialHandle {
    PotentialHandle::MobiusTransformed {
        base: Box::new(v.clone()),
        phi: *phi,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Support {
    WholePlane,
    CompactRegion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumData {
    pub potential: PotentialHandle,
    pub support: Support,
    /// `I_V(μ_V)`.
    pub i_v: f64,
    /// Robin constant `c_V = I_V - ∫ V/2 dμ_V`.
    pub c_v: f64,
    /// `∫ m_V log m_V dx`.
    pub entropy_integral: f64,
    /// `∫ log(1 + |x|^2) dμ_V`.
    pub log_moment: f64,
}

impl EquilibriumData {
    /// Equilibrium density `m_V(x)`.
    pub fn density(&self, x: PlanarPoint) -> f64 {
        let w = 1.0 + x.norm_sq();
        self.potential.sphere_density(Some(x)) / (w * w)
    }
}

pub fn canonical_equilibrium() -> EquilibriumData {
    let i_v = 0.5;
    let log_moment = 1.0;
    EquilibriumData {
        potential: PotentialHandle::Canonical,
        support: Support::WholePlane,
        i_v,
        // V = log(1 + |x|^2), so ∫ V/2 dμ_V is half the log moment.
        c_v: i_v - 0.5 * log_moment,
        entropy_integral: -(PI.ln() + 2.0),
        log_moment,
    }
}

/// Equilibrium data for the canonical potential and its images under
/// sphere rotations. A rotation leaves the uniform sphere measure invariant,
/// so all scalar functionals coincide with the canonical ones.
pub fn equilibrium(v: &PotentialHandle) -> Result<EquilibriumData> {
    if !v.is_rotation_of_canonical() {
        return Err(Error::UnsupportedPotential);
    }
    Ok(EquilibriumData {
        potential: v.clone(),
        ..canonical_equilibrium()
    })
}

/// Logarithmic potential `U^{μ_V}(x) = -∫ log|x - y| dμ_V(y)`. From the
/// Frostman equality on a full-plane support, `U = c_V - V/2`.
pub fn u_mu(x: PlanarPoint, eq: &EquilibriumData) -> Result<f64> {
    if !eq.potential.is_canonical() {
        return Err(Error::UnsupportedPotential);
    }
    Ok(eq.c_v - 0.5 * eq.potential.value(x))
}

/// `ζ(x) = U^{μ_V}(x) + V(x)/2 - c_V`; identically zero for the canonical
/// potential.
pub fn zeta(_x: PlanarPoint, eq: &EquilibriumData) -> Result<f64> {
    if !eq.potential.is_canonical() || eq.support != Support::WholePlane {
        return Err(Error::UnsupportedPotential);
    }
    Ok(0.0)
}

/// `α_V = min_w1 / π - (1/2) ∫ m_V log m_V`, with `min_w1` standing for the
/// minimum of the renormalized energy at density one.
pub fn alpha_v(eq: &EquilibriumData, min_w1: f64) -> f64 {
    min_w1 / PI - 0.5 * eq.entropy_integral
}

fn radial_density(eq: &EquilibriumData) -> Result<impl Fn(f64) -> f64 + '_> {
    if !eq.potential.is_rotation_of_canonical() {
        return Err(Error::UnsupportedPotential);
    }
    Ok(move |r: f64| eq.density(PlanarPoint::new(r, 0.0)))
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        max_intervals: 4000,
    }
}

/// `∫ m_V dx` by radial quadrature.
pub fn normalization_quadrature(eq: &EquilibriumData) -> Result<f64> {
    let m = radial_density(eq)?;
    Ok(integrate_half_line(|r| 2.0 * PI * r * m(r), quad_opts())?.value)
}

/// `∫ log(1 + |x|^2) dμ_V` by radial quadrature.
pub fn log_moment_quadrature(eq: &EquilibriumData) -> Result<f64> {
    let m = radial_density(eq)?;
    Ok(integrate_half_line(|r| 2.0 * PI * r * m(r) * (r * r).ln_1p(), quad_opts())?.value)
}

/// `∫ m_V log m_V dx` by radial quadrature.
pub fn entropy_quadrature(eq: &EquilibriumData) -> Result<f64> {
    let m = radial_density(eq)?;
    Ok(integrate_half_line(
        |r| {
            let d = m(r);
            if d > 0.0 {
                2.0 * PI * r * d * d.ln()
            } else {
                0.0
            }
        },
        quad_opts(),
    )?
    .value)
}

/// `I_V(μ_V) = ∫ V dμ_V + ∫ U^{μ_V} dμ_V`, with the potential of the radial
/// measure obtained from circle averages of `log|x - y|`, which equal
/// `log max(|x|, |y|)`.
pub fn energy_quadrature(eq: &EquilibriumData) -> Result<f64> {
    let m = radial_density(eq)?;
    let v = |r: f64| eq.potential.value(PlanarPoint::new(r, 0.0));
    let inner = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-13,
        max_intervals: 4000,
    };
    let weight = |s: f64| 2.0 * PI * s * m(s);
    let potential_at = |r: f64| -> f64 {
        let mass_inside = if r > 0.0 {
            integrate(weight, 0.0, r, inner)
                .map(|q| q.value)
                .unwrap_or(f64::NAN)
        } else {
            0.0
        };
        let theta0 = r.atan();
        let tail = integrate(
            |t: f64| {
                let (sn, cs) = t.sin_cos();
                if cs <= 0.0 {
                    return 0.0;
                }
                let s = sn / cs;
                weight(s) * s.ln() / (cs * cs)
            },
            theta0,
            std::f64::consts::FRAC_PI_2,
            inner,
        )
        .map(|q| q.value)
        .unwrap_or(f64::NAN);
        let head = if r > 0.0 { mass_inside * r.ln() } else { 0.0 };
        -(head + tail)
    };
    let total = integrate_half_line(|r| weight(r) * (v(r) + potential_at(r)), quad_opts())?;
    if !total.value.is_finite() {
        return Err(Error::DomainError("inner quadrature failed".into()));
    }
    Ok(total.value)
}
