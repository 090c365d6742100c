//! Logarithmic point energies on the sphere and in the plane.
//!
//! The crate covers the discrete side (energies, the stereographic
//! correspondence between planar Coulomb gases and spherical configurations,
//! a Riemannian minimizer for the spherical energy), the continuum side for
//! the canonical potential `V(x) = log(1 + |x|^2)` (equilibrium measure,
//! Robin constant, the functionals entering the order-`n` constant), the
//! closed-form renormalized energy of Bravais lattices through the Dedekind
//! eta function, and the fitting of the order-`n` constant from minimized
//! energies.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod energy;
mod error;
pub mod geometry;
pub mod lattice;
pub mod optimizer;
pub mod potential;
pub mod quadrature;
pub mod sum;

pub use error::{Error, Result};

pub use asymptotics::{
    expansion_report, fit_constant, residuals, ExpansionReport, ExpansionResidual, FitModel,
    FitResult, FittedModel, TableEntry,
};
pub use energy::{
    grad_log_energy_sphere, hamiltonian_w, hamiltonian_wbar, log_energy_sphere,
    mobius_energy_identity_check, splitting_report, SplittingReport,
};
pub use geometry::{
    chordal_distance, inverse_stereographic, mobius_apply, stereographic, MobiusMap,
    PlanarConfiguration, PlanarPoint, Rotation3, SphereConfiguration, SpherePoint,
};
pub use lattice::{
    chowla_selberg_check, dedekind_eta, gamma_fn, minimality_scan, paper_constants, reduce_lattice,
    w_lattice, BravaisLattice, LatticeShape, PaperConstants, ScanResult,
};
pub use optimizer::{
    energy_table, minimize_log_energy, separation_check, InitStrategy, MinimizeOptions,
    MinimizeResult,
};
pub use potential::{
    alpha_v, canonical_equilibrium, equilibrium, transform_potential, u_mu, zeta, EquilibriumData,
    PotentialHandle, Support,
};
