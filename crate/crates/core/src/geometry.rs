//! Stereographic and Möbius transport between the plane and the sphere.
//!
//! Sphere points always live on the origin-centred unit sphere. The
//! radius-1/2 sphere `S` centred at `(0, 0, 1/2)`, on which the inverse
//! stereographic projection `T(x) = (x1, x2, |x|^2) / (1 + |x|^2)` lands,
//! only appears inside [`stereographic`] and [`inverse_stereographic`]:
//! the unit-sphere image is `2 T(x) - (0, 0, 1)`. Distances on the unit
//! sphere are therefore twice the distances on `S`, which shifts every
//! ordered-pair log energy of `k` points by `-k (k - 1) log 2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance on `|cz + d|` below which a point is treated as the pole of a
/// Möbius map.
pub const POLE_TOLERANCE: f64 = 1e-14;

/// Tolerance on the distance to the north pole below which a sphere point
/// has no planar preimage.
pub const NORTH_POLE_TOLERANCE: f64 = 1e-12;

/// Distances below this are treated as coincident points.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-14;

/// The north pole of the unit sphere.
pub const NORTH: [f64; 3] = [0.0, 0.0, 1.0];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub x1: f64,
    pub x2: f64,
}

impl PlanarPoint {
    pub const ORIGIN: PlanarPoint = PlanarPoint { x1: 0.0, x2: 0.0 };

    pub fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    pub fn norm_sq(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2
    }

    pub fn norm(&self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn dist(&self, other: &PlanarPoint) -> f64 {
        (self.x1 - other.x1).hypot(self.x2 - other.x2)
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    pub(crate) fn to_complex(self) -> Complex64 {
        Complex64::new(self.x1, self.x2)
    }

    pub(crate) fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl From<[f64; 2]> for PlanarPoint {
    fn from(v: [f64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

/// A point of the unit sphere. The constructor normalizes its input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct SpherePoint {
    y: [f64; 3],
}

impl SpherePoint {
    pub const NORTH: SpherePoint = SpherePoint { y: NORTH };

    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = norm3(&v);
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidInput(format!(
                "cannot normalize {v:?} onto the sphere"
            )));
        }
        // vectors already unit to rounding are kept, so stored points
        // survive a write/read cycle bit for bit
        if (norm - 1.0).abs() <= 2.0 * f64::EPSILON {
            return Ok(Self { y: v });
        }
        Ok(Self {
            y: [v[0] / norm, v[1] / norm, v[2] / norm],
        })
    }

    /// Spherical coordinates: polar angle from the north pole and azimuth.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new([st * cp, st * sp, ct]).expect("angles give a unit vector")
    }

    pub fn coords(&self) -> [f64; 3] {
        self.y
    }

    pub fn dist(&self, other: &SpherePoint) -> f64 {
        dist3(&self.y, &other.y)
    }

    pub fn is_north(&self) -> bool {
        dist3(&self.y, &NORTH) < NORTH_POLE_TOLERANCE
    }
}

impl TryFrom<[f64; 3]> for SpherePoint {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SpherePoint> for [f64; 3] {
    fn from(p: SpherePoint) -> Self {
        p.y
    }
}

/// `n >= 2` pairwise distinct planar points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PlanarPoint>", into = "Vec<PlanarPoint>")]
pub struct PlanarConfiguration {
    points: Vec<PlanarPoint>,
}

impl PlanarConfiguration {
    pub fn new(points: Vec<PlanarPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a configuration needs at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("point {i} is not finite")));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i].dist(&points[j]) < COINCIDENCE_TOLERANCE {
                    return Err(Error::CoincidentPoints { i, j });
                }
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[PlanarPoint] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }
}

impl TryFrom<Vec<PlanarPoint>> for PlanarConfiguration {
    type Error = Error;

    fn try_from(points: Vec<PlanarPoint>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<PlanarConfiguration> for Vec<PlanarPoint> {
    fn from(cfg: PlanarConfiguration) -> Self {
        cfg.points
    }
}

/// `n >= 2` pairwise distinct points on the unit sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SpherePoint>", into = "Vec<SpherePoint>")]
pub struct SphereConfiguration {
    points: Vec<SpherePoint>,
}

impl SphereConfiguration {
    pub fn new(points: Vec<SpherePoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a configuration needs at least 2 points, got {}",
                points.len()
            )));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i].dist(&points[j]) < COINCIDENCE_TOLERANCE {
                    return Err(Error::CoincidentPoints { i, j });
                }
            }
        }
        Ok(Self { points })
    }

    /// Builds a configuration from raw 3-vectors, normalizing each.
    pub fn from_vectors(vectors: &[[f64; 3]]) -> Result<Self> {
        let points = vectors
            .iter()
            .map(|v| SpherePoint::new(*v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn vectors(&self) -> Vec<[f64; 3]> {
        self.points.iter().map(|p| p.y).collect()
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn contains_north(&self) -> bool {
        self.points.iter().any(SpherePoint::is_north)
    }

    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                best = best.min(self.points[i].dist(&self.points[j]));
            }
        }
        best
    }

    pub fn rotated(&self, rot: &Rotation3) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| SpherePoint::new(rot.apply(&p.y)).expect("rotation preserves norm"))
                .collect(),
        }
    }

    /// Rotated copy with point 0 on the north pole and point 1 at zero
    /// azimuth. Two configurations that differ by a rotation have the same
    /// canonical form (up to rounding) when their first two points agree.
    pub fn canonical_rotation(&self) -> Self {
        self.rotated(&canonical_rotation_of(&self.vectors()))
    }
}

impl TryFrom<Vec<SpherePoint>> for SphereConfiguration {
    type Error = Error;

    fn try_from(points: Vec<SpherePoint>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<SphereConfiguration> for Vec<SpherePoint> {
    fn from(cfg: SphereConfiguration) -> Self {
        cfg.points
    }
}

/// Unit-sphere image of a planar point, `2 T(x) - (0, 0, 1)`.
pub fn stereographic(x: PlanarPoint) -> SpherePoint {
    let r2 = x.norm_sq();
    let s = 1.0 + r2;
    let y = [2.0 * x.x1 / s, 2.0 * x.x2 / s, (r2 - 1.0) / s];
    // The formula is exact up to rounding; renormalizing keeps the unit-norm
    // invariant at 1 ulp even for large |x|.
    SpherePoint::new(y).expect("stereographic image is nonzero")
}

pub fn inverse_stereographic(y: SpherePoint) -> Result<PlanarPoint> {
    if y.is_north() {
        return Err(Error::NorthPoleNotRepresentable);
    }
    let [a, b, c] = y.y;
    // 1 - c loses precision near the north pole; a^2 + b^2 = (1 - c)(1 + c)
    // gives the same denominator through the well-conditioned branch.
    let denom = if c > 0.0 {
        (a * a + b * b) / (1.0 + c)
    } else {
        1.0 - c
    };
    Ok(PlanarPoint::new(a / denom, b / denom))
}

/// Distance between the unit-sphere images of two planar points.
pub fn chordal_distance(x: PlanarPoint, y: PlanarPoint) -> f64 {
    2.0 * x.dist(&y) / ((1.0 + x.norm_sq()).sqrt() * (1.0 + y.norm_sq()).sqrt())
}

/// A fractional linear map `z -> (az + b) / (cz + d)`, normalized so that
/// `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det.norm() > 1e-300) || !det.is_finite() {
            return Err(Error::DomainError(
                "Möbius coefficients must satisfy ad - bc != 0".into(),
            ));
        }
        let s = det.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    /// `z -> -1/z`.
    pub fn inversion() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            a: zero,
            b: -one,
            c: one,
            d: zero,
        }
    }

    /// The map `T^-1 R T` induced by the rotation of the unit sphere about
    /// `axis` by `angle` (right-handed).
    pub fn from_rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = norm3(&axis);
        if !(norm > 0.0) {
            return Err(Error::InvalidInput("rotation axis must be nonzero".into()));
        }
        let [nx, ny, nz] = [axis[0] / norm, axis[1] / norm, axis[2] / norm];
        let (s, c) = (angle / 2.0).sin_cos();
        // exp(-i angle/2 n.sigma) in the spin-1/2 representation.
        Self::new(
            Complex64::new(c, s * nz),
            Complex64::new(-s * ny, s * nx),
            Complex64::new(s * ny, s * nx),
            Complex64::new(c, -s * nz),
        )
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        MobiusMap::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
        .expect("product of unimodular matrices is unimodular")
    }

    pub fn inverse(&self) -> MobiusMap {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// The finite point sent to infinity, if any.
    pub fn pole(&self) -> Option<PlanarPoint> {
        if self.c.norm() == 0.0 {
            None
        } else {
            Some(PlanarPoint::from_complex(-self.d / self.c))
        }
    }

    /// Image of infinity, or `None` when the map fixes infinity.
    pub fn image_of_infinity(&self) -> Option<PlanarPoint> {
        if self.c.norm() == 0.0 {
            None
        } else {
            Some(PlanarPoint::from_complex(self.a / self.c))
        }
    }

    /// Whether the map comes from a rotation of the sphere (matrix in SU(2)).
    /// Only these maps preserve chordal distances.
    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.d - self.a.conj()).norm() <= tol && (self.c + self.b.conj()).norm() <= tol
    }

    pub fn is_pole(&self, x: PlanarPoint) -> bool {
        (self.c * x.to_complex() + self.d).norm() < POLE_TOLERANCE
    }
}

pub fn mobius_apply(phi: &MobiusMap, x: PlanarPoint) -> Result<PlanarPoint> {
    let z = x.to_complex();
    let den = phi.c * z + phi.d;
    if den.norm() < POLE_TOLERANCE {
        return Err(Error::PoleOfMap);
    }
    Ok(PlanarPoint::from_complex((phi.a * z + phi.b) / den))
}

/// A proper rotation of R^3 stored as a row-major matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation3 {
    m: [[f64; 3]; 3],
}

impl Rotation3 {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Rodrigues' formula, right-handed about `axis`.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let n = norm3(&axis);
        let [x, y, z] = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Self {
            m: [
                [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
                [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
                [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
            ],
        }
    }

    /// A rotation taking the unit vector `from` to the unit vector `to`.
    pub fn aligning(from: &[f64; 3], to: &[f64; 3]) -> Self {
        let axis = cross3(from, to);
        let sin = norm3(&axis);
        let cos = dot3(from, to);
        if sin < 1e-15 {
            if cos > 0.0 {
                return Self::identity();
            }
            // Antiparallel: any axis orthogonal to `from` works.
            let trial = if from[0].abs() < 0.9 {
                [1.0, 0.0, 0.0]
            } else {
                [0.0, 1.0, 0.0]
            };
            let perp = cross3(from, &trial);
            return Self::from_axis_angle(perp, std::f64::consts::PI);
        }
        Self::from_axis_angle(axis, sin.atan2(cos))
    }

    pub fn apply(&self, v: &[f64; 3]) -> [f64; 3] {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// `self ∘ other`.
    pub fn then(&self, other: &Rotation3) -> Rotation3 {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Rotation3 { m }
    }
}

/// Rotation sending `points[0]` to the north pole and `points[1]` to zero
/// azimuth.
pub(crate) fn canonical_rotation_of(points: &[[f64; 3]]) -> Rotation3 {
    let first = Rotation3::aligning(&points[0], &NORTH);
    if points.len() < 2 {
        return first;
    }
    let second = first.apply(&points[1]);
    let azimuth = second[1].atan2(second[0]);
    Rotation3::from_axis_angle(NORTH, -azimuth).then(&first)
}

#[inline]
pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

#[inline]
pub(crate) fn dist3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    norm3(&d)
}

#[inline]
pub(crate) fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close3(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        dist3(&a, &b) <= tol
    }

    #[test]
    fn stereographic_examples() {
        assert_eq!(
            stereographic(PlanarPoint::ORIGIN).coords(),
            [0.0, 0.0, -1.0]
        );
        assert!(close3(
            stereographic(PlanarPoint::new(1.0, 0.0)).coords(),
            [1.0, 0.0, 0.0],
            1e-15
        ));
        let d = dist3(&stereographic(PlanarPoint::ORIGIN).coords(), &NORTH);
        assert!((d - 2.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_stereographic_examples() {
        let south = SpherePoint::new([0.0, 0.0, -1.0]).unwrap();
        assert_eq!(inverse_stereographic(south).unwrap(), PlanarPoint::ORIGIN);
        let eq = SpherePoint::new([1.0, 0.0, 0.0]).unwrap();
        let x = inverse_stereographic(eq).unwrap();
        assert!((x.x1 - 1.0).abs() < 1e-15 && x.x2.abs() < 1e-15);
        assert_eq!(
            inverse_stereographic(SpherePoint::NORTH),
            Err(Error::NorthPoleNotRepresentable)
        );
    }

    #[test]
    fn chordal_distance_examples() {
        let d = chordal_distance(PlanarPoint::ORIGIN, PlanarPoint::new(1.0, 0.0));
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        let x = PlanarPoint::new(0.3, -2.0);
        assert_eq!(chordal_distance(x, x), 0.0);
    }

    #[test]
    fn mobius_examples() {
        let x = PlanarPoint::new(0.7, -1.3);
        assert_eq!(mobius_apply(&MobiusMap::identity(), x).unwrap(), x);
        let inv = MobiusMap::inversion();
        let y = mobius_apply(&inv, PlanarPoint::new(1.0, 0.0)).unwrap();
        assert!((y.x1 + 1.0).abs() < 1e-15 && y.x2.abs() < 1e-15);
        let y = mobius_apply(&inv, PlanarPoint::new(0.0, 2.0)).unwrap();
        assert!(y.x1.abs() < 1e-15 && (y.x2 - 0.5).abs() < 1e-15);
        assert_eq!(
            mobius_apply(&inv, PlanarPoint::ORIGIN),
            Err(Error::PoleOfMap)
        );
    }

    #[test]
    fn mobius_normalizes_determinant() {
        let phi = MobiusMap::new(
            Complex64::new(2.0, 1.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(-1.0, 3.0),
            Complex64::new(0.0, 4.0),
        )
        .unwrap();
        let [a, b, c, d] = phi.coefficients();
        assert!((a * d - b * c - 1.0).norm() < 1e-14);
        let zero = Complex64::new(0.0, 0.0);
        assert!(MobiusMap::new(zero, zero, zero, zero).is_err());
    }

    #[test]
    fn rotation_maps_conjugate_sphere_rotations() {
        let axis = [0.3, -0.5, 0.8];
        let angle = 1.1;
        let phi = MobiusMap::from_rotation(axis, angle).unwrap();
        assert!(phi.is_unitary(1e-14));
        assert!(MobiusMap::inversion().is_unitary(0.0));
        let rot = Rotation3::from_axis_angle(axis, angle);
        for &(a, b) in &[(0.2, 0.1), (-3.0, 1.5), (10.0, -7.0)] {
            let x = PlanarPoint::new(a, b);
            let via_plane = stereographic(mobius_apply(&phi, x).unwrap()).coords();
            let via_sphere = rot.apply(&stereographic(x).coords());
            assert!(
                close3(via_plane, via_sphere, 1e-13),
                "{via_plane:?} vs {via_sphere:?}"
            );
        }
    }

    #[test]
    fn canonical_rotation_places_first_two_points() {
        let cfg = SphereConfiguration::from_vectors(&[
            [0.3, 0.4, -0.5],
            [-0.2, 0.9, 0.1],
            [0.0, -1.0, 0.2],
        ])
        .unwrap();
        let canon = cfg.canonical_rotation().vectors();
        assert!(close3(canon[0], NORTH, 1e-14));
        assert!(canon[1][1].abs() < 1e-14 && canon[1][0] > 0.0);
        // antipodal first point
        let cfg = SphereConfiguration::from_vectors(&[[0.0, 0.0, -1.0], [1.0, 0.0, 0.0]]).unwrap();
        assert!(close3(cfg.canonical_rotation().vectors()[0], NORTH, 1e-14));
    }

    #[test]
    fn configuration_validation() {
        assert!(PlanarConfiguration::new(vec![PlanarPoint::ORIGIN]).is_err());
        assert_eq!(
            PlanarConfiguration::new(vec![PlanarPoint::ORIGIN, PlanarPoint::ORIGIN]),
            Err(Error::CoincidentPoints { i: 0, j: 1 })
        );
        let cfg = SphereConfiguration::from_vectors(&[[0.0, 0.0, 2.0], [0.0, 0.0, -1.0]]).unwrap();
        assert!(cfg.contains_north());
        assert_eq!(cfg.min_separation(), 2.0);
    }

    fn planar() -> impl Strategy<Value = PlanarPoint> {
        (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(a, b)| PlanarPoint::new(a, b))
    }

    proptest! {
        #[test]
        fn round_trip_plane(x in planar()) {
            let back = inverse_stereographic(stereographic(x)).unwrap();
            let scale = 1.0 + x.norm_sq();
            prop_assert!(back.dist(&x) <= 1e-12 * scale);
        }

        #[test]
        fn round_trip_sphere(theta in 0.01..std::f64::consts::PI, phi in 0.0..6.3f64) {
            let y = SpherePoint::from_angles(theta, phi);
            let back = stereographic(inverse_stereographic(y).unwrap());
            prop_assert!(y.dist(&back) <= 1e-12);
            prop_assert!((norm3(&back.coords()) - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn distance_identity(x in planar(), y in planar()) {
            let lhs = chordal_distance(x, y);
            let rhs = stereographic(x).dist(&stereographic(y));
            prop_assert!((lhs - rhs).abs() <= 1e-13);
        }

        #[test]
        fn north_pole_limit(r in 0.0..1e6f64, t in 0.0..6.3f64) {
            let x = PlanarPoint::new(r * t.cos(), r * t.sin());
            let d = dist3(&stereographic(x).coords(), &NORTH) * (1.0 + x.norm_sq()).sqrt();
            prop_assert!((d - 2.0).abs() <= 1e-12);
        }

        #[test]
        fn mobius_composition(
            re in prop::array::uniform4(-2.0..2.0f64),
            im in prop::array::uniform4(-2.0..2.0f64),
            x in planar(),
        ) {
            let phi = MobiusMap::new(
                Complex64::new(re[0], im[0]), Complex64::new(re[1], im[1]),
                Complex64::new(re[2], im[2]), Complex64::new(re[3], im[3]),
            );
            prop_assume!(phi.is_ok());
            let phi = phi.unwrap();
            let psi = MobiusMap::from_rotation([im[0], re[1], 1.0], re[2]).unwrap();
            let inner = mobius_apply(&psi, x);
            prop_assume!(inner.is_ok());
            let inner = inner.unwrap();
            let den = (phi.coefficients()[2] * inner.to_complex() + phi.coefficients()[3]).norm();
            prop_assume!(den > 1e-3 && inner.norm() < 1e3);
            let lhs = mobius_apply(&phi.compose(&psi), x).unwrap();
            let rhs = mobius_apply(&phi, inner).unwrap();
            let scale = 1.0 + rhs.norm();
            prop_assert!(lhs.dist(&rhs) <= 1e-12 * scale * scale);
        }
    }
}
