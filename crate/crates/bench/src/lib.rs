//! Fixtures shared by the benchmarks.

use logsphere_core::optimizer::spiral_points;
use logsphere_core::{inverse_stereographic, PlanarConfiguration, SphereConfiguration};

/// `n` spiral points; deterministic and well separated.
pub fn sphere_fixture(n: usize) -> SphereConfiguration {
    SphereConfiguration::from_vectors(&spiral_points(n)).expect("spiral points are distinct")
}

/// Planar preimages of the spiral points, dropping the one at the north pole.
pub fn planar_fixture(n: usize) -> PlanarConfiguration {
    let cfg = sphere_fixture(n + 1);
    let points = cfg
        .points()
        .iter()
        .filter(|p| !p.is_north())
        .take(n)
        .map(|&p| inverse_stereographic(p).expect("north pole filtered"))
        .collect();
    PlanarConfiguration::new(points).expect("distinct preimages")
}
