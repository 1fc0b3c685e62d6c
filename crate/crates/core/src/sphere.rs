//! Spherical-geometry primitives on the unit sphere: points, tangent
//! vectors, geodesic triangles, distances and the spherical cosine/sine
//! laws.
//!
//! All angles are radians. Every inverse-cosine argument is clamped to
//! `[-1, 1]` because dot products of unit vectors can overshoot by a few
//! ulps.

use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::math::vec3;
use crate::math::{acos_clamped, asin, atan2, clamp_unit, cos, fabs, fmod, sin};
use crate::{Error, Result};

/// `1 - |<p, q>|` below this means the geodesic through `p` and `q` is
/// undefined (coincident or antipodal endpoints).
pub const DEGENERATE_DOT_TOL: f64 = 1e-10;

/// A point on the unit sphere, stored as a unit 3-vector.
///
/// Construction normalizes, so `x^2 + y^2 + z^2 = 1` within 1e-12 always
/// holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitPoint {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitPoint {
    /// Normalizes `(x, y, z)` onto the sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::InvalidCoordinates);
        }
        let n = vec3::norm([x, y, z]);
        if n < 1e-12 {
            return Err(Error::InvalidCoordinates);
        }
        let p = Self {
            x: x / n,
            y: y / n,
            z: z / n,
        };
        debug_assert!(fabs(vec3::dot(p.as_array(), p.as_array()) - 1.0) < 1e-12);
        Ok(p)
    }

    pub fn from_array(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &UnitPoint) -> f64 {
        vec3::dot(self.as_array(), other.as_array())
    }
}

/// Latitude/azimuth pair parameterizing the sphere as
/// `(cos(omega) cos(phi), cos(omega) sin(phi), sin(omega))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCoords {
    /// Latitude in `[-pi/2, pi/2]`.
    pub omega: f64,
    /// Azimuth in `[0, 2*pi)`.
    pub phi: f64,
}

impl SphericalCoords {
    /// Validates the latitude range and wraps the azimuth into `[0, 2*pi)`.
    pub fn new(omega: f64, phi: f64) -> Result<Self> {
        if !(omega.is_finite() && phi.is_finite()) || fabs(omega) > FRAC_PI_2 + 1e-12 {
            return Err(Error::OutOfRange {
                value: omega,
                max: FRAC_PI_2,
            });
        }
        let omega = clamp_unit(omega / FRAC_PI_2) * FRAC_PI_2;
        let mut phi = fmod(phi, TAU);
        if phi < 0.0 {
            phi += TAU;
        }
        Ok(Self { omega, phi })
    }

    pub fn to_point(&self) -> UnitPoint {
        UnitPoint::new(
            cos(self.omega) * cos(self.phi),
            cos(self.omega) * sin(self.phi),
            sin(self.omega),
        )
        .expect("parameterization always yields a unit vector")
    }

    pub fn from_point(p: &UnitPoint) -> Self {
        let omega = asin(clamp_unit(p.z()));
        let mut phi = atan2(p.y(), p.x());
        if phi < 0.0 {
            phi += TAU;
        }
        Self { omega, phi }
    }
}

/// A vector in the tangent plane of its base point.
///
/// `<base, direction>` is always 0 within 1e-10; directions produced by
/// [`unit_tangent`] additionally have unit length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    base: UnitPoint,
    direction: [f64; 3],
}

impl TangentVector {
    pub(crate) fn new(base: UnitPoint, direction: [f64; 3]) -> Self {
        debug_assert!(fabs(vec3::dot(base.as_array(), direction)) < 1e-10);
        Self { base, direction }
    }

    pub fn base(&self) -> UnitPoint {
        self.base
    }

    pub fn direction(&self) -> [f64; 3] {
        self.direction
    }

    pub fn norm(&self) -> f64 {
        vec3::norm(self.direction)
    }
}

/// Three pairwise non-coincident, non-antipodal points on the sphere.
///
/// The pairwise constraint `|<v_i, v_j>| < 1 - 1e-10` bounds every side
/// into `(0, pi - 1e-10]`, so sides are strictly positive and bounded away
/// from `pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicTriangle {
    vertices: [UnitPoint; 3],
}

impl GeodesicTriangle {
    pub fn new(v1: UnitPoint, v2: UnitPoint, v3: UnitPoint) -> Result<Self> {
        let vs = [v1, v2, v3];
        for i in 0..3 {
            for j in (i + 1)..3 {
                if fabs(vs[i].dot(&vs[j])) >= 1.0 - DEGENERATE_DOT_TOL {
                    return Err(Error::DegenerateTriangle);
                }
            }
        }
        Ok(Self { vertices: vs })
    }

    /// The canonical octant triangle `(1,0,0), (0,1,0), (0,0,1)` whose
    /// three sides all measure `pi/2`.
    pub fn octant() -> Self {
        Self {
            vertices: [
                UnitPoint {
                    x: 1.0,
                    y: 0.0,
                    z: 0.0,
                },
                UnitPoint {
                    x: 0.0,
                    y: 1.0,
                    z: 0.0,
                },
                UnitPoint {
                    x: 0.0,
                    y: 0.0,
                    z: 1.0,
                },
            ],
        }
    }

    pub fn vertices(&self) -> [UnitPoint; 3] {
        self.vertices
    }

    /// Vertex by 1-based index.
    pub fn vertex(&self, i: usize) -> UnitPoint {
        self.vertices[i - 1]
    }

    pub fn side_12(&self) -> f64 {
        geodesic_distance(&self.vertices[0], &self.vertices[1])
    }

    pub fn side_23(&self) -> f64 {
        geodesic_distance(&self.vertices[1], &self.vertices[2])
    }

    pub fn side_13(&self) -> f64 {
        geodesic_distance(&self.vertices[0], &self.vertices[2])
    }

    /// Sides ordered `(s12, s23, s13)`.
    pub fn sides(&self) -> [f64; 3] {
        [self.side_12(), self.side_23(), self.side_13()]
    }
}

/// Length of the minor great-circle arc between `p` and `q`, in `[0, pi]`.
pub fn geodesic_distance(p: &UnitPoint, q: &UnitPoint) -> f64 {
    acos_clamped(p.dot(q))
}

/// Unit tangent vector at `p` pointing along the minor arc toward `q`.
pub fn unit_tangent(p: &UnitPoint, q: &UnitPoint) -> Result<TangentVector> {
    let d = p.dot(q);
    if fabs(d) >= 1.0 - DEGENERATE_DOT_TOL {
        return Err(Error::DegenerateDirection);
    }
    let raw = vec3::sub(q.as_array(), vec3::scale(p.as_array(), d));
    let n = vec3::norm(raw);
    Ok(TangentVector::new(*p, vec3::scale(raw, 1.0 / n)))
}

/// The point at arc distance `s` from `p` along the geodesic toward `q`.
///
/// `s` must lie in `[0, geodesic_distance(p, q)]`.
pub fn point_on_geodesic(p: &UnitPoint, q: &UnitPoint, s: f64) -> Result<UnitPoint> {
    let d = geodesic_distance(p, q);
    if !s.is_finite() || s < 0.0 || s > d + 1e-12 {
        return Err(Error::OutOfRange { value: s, max: d });
    }
    let t = unit_tangent(p, q)?;
    let v = vec3::add(
        vec3::scale(p.as_array(), cos(s)),
        vec3::scale(t.direction(), sin(s)),
    );
    UnitPoint::from_array(v)
}

/// Spherical law of cosines: the side opposite the angle `alpha` included
/// between sides `b` and `c`.
///
/// Expects `b, c` in `(0, pi)` and `alpha` in `[0, pi]`; the cosine
/// argument is clamped, so the call itself cannot fail.
pub fn spherical_cosine_side(b: f64, c: f64, alpha: f64) -> f64 {
    debug_assert!(b > 0.0 && b < PI && c > 0.0 && c < PI);
    debug_assert!((0.0..=PI + 1e-12).contains(&alpha));
    acos_clamped(cos(b) * cos(c) + sin(b) * sin(c) * cos(alpha))
}

/// Maximum pairwise deviation of the three sine-law ratios
/// `sin(side) / sin(opposite angle)` of a triangle; zero (to rounding) for
/// every valid spherical triangle.
pub fn sine_law_residual(tri: &GeodesicTriangle) -> f64 {
    let v = tri.vertices();
    let angle_at = |i: usize, j: usize, k: usize| -> f64 {
        let tj = unit_tangent(&v[i], &v[j]).expect("triangle invariant");
        let tk = unit_tangent(&v[i], &v[k]).expect("triangle invariant");
        acos_clamped(vec3::dot(tj.direction(), tk.direction()))
    };
    // Ratio at vertex i uses the side opposite to it.
    let ratios = [
        sin(tri.side_23()) / sin(angle_at(0, 1, 2)),
        sin(tri.side_13()) / sin(angle_at(1, 0, 2)),
        sin(tri.side_12()) / sin(angle_at(2, 0, 1)),
    ];
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let dev = fabs(ratios[i] - ratios[j]);
            if dev > worst {
                worst = dev;
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_3_INV: f64 = 0.577_350_269_189_625_8;

    fn pt(x: f64, y: f64, z: f64) -> UnitPoint {
        UnitPoint::new(x, y, z).unwrap()
    }

    #[test]
    fn distance_octant_sides() {
        let tri = GeodesicTriangle::octant();
        assert!((tri.side_12() - FRAC_PI_2).abs() < 1e-15);
        assert!((tri.side_23() - FRAC_PI_2).abs() < 1e-15);
        assert!((tri.side_13() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn distance_identity_is_zero() {
        let p = pt(0.3, -0.5, 0.8);
        assert_eq!(geodesic_distance(&p, &p), 0.0);
    }

    #[test]
    fn distance_to_octant_center() {
        let a1 = pt(1.0, 0.0, 0.0);
        let c = pt(SQRT_3_INV, SQRT_3_INV, SQRT_3_INV);
        let expect = (1.0 / 3.0f64.sqrt()).acos();
        assert!((geodesic_distance(&a1, &c) - expect).abs() < 1e-14);
        assert!((expect - 0.955_317).abs() < 1e-6);
    }

    #[test]
    fn tangent_orthogonal_pairs() {
        let t = unit_tangent(&pt(1.0, 0.0, 0.0), &pt(0.0, 1.0, 0.0)).unwrap();
        assert!(vec3::norm(vec3::sub(t.direction(), [0.0, 1.0, 0.0])) < 1e-15);
        let t = unit_tangent(&pt(0.0, 0.0, 1.0), &pt(1.0, 0.0, 0.0)).unwrap();
        assert!(vec3::norm(vec3::sub(t.direction(), [1.0, 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn tangent_oblique_pair() {
        let h = 0.5f64.sqrt();
        let t = unit_tangent(&pt(1.0, 0.0, 0.0), &pt(h, h, 0.0)).unwrap();
        assert!(vec3::norm(vec3::sub(t.direction(), [0.0, 1.0, 0.0])) < 1e-12);
    }

    #[test]
    fn tangent_degenerate_endpoints() {
        let p = pt(1.0, 0.0, 0.0);
        assert_eq!(unit_tangent(&p, &p), Err(Error::DegenerateDirection));
        let q = pt(-1.0, 0.0, 0.0);
        assert_eq!(unit_tangent(&p, &q), Err(Error::DegenerateDirection));
    }

    #[test]
    fn geodesic_point_at_zero_is_start() {
        let p = pt(0.2, 0.9, -0.1);
        let q = pt(-0.4, 0.1, 0.9);
        let r = point_on_geodesic(&p, &q, 0.0).unwrap();
        assert!(vec3::norm(vec3::sub(r.as_array(), p.as_array())) < 1e-15);
    }

    #[test]
    fn geodesic_quarter_arc_midpoint() {
        let r = point_on_geodesic(
            &pt(1.0, 0.0, 0.0),
            &pt(0.0, 1.0, 0.0),
            core::f64::consts::FRAC_PI_4,
        )
        .unwrap();
        let h = 0.5f64.sqrt();
        assert!(vec3::norm(vec3::sub(r.as_array(), [h, h, 0.0])) < 1e-15);
    }

    #[test]
    fn geodesic_point_on_meridian() {
        let s = core::f64::consts::FRAC_PI_6;
        let r = point_on_geodesic(&pt(1.0, 0.0, 0.0), &pt(0.0, 0.0, 1.0), s).unwrap();
        assert!(vec3::norm(vec3::sub(r.as_array(), [s.cos(), 0.0, s.sin()])) < 1e-15);
    }

    #[test]
    fn geodesic_rejects_out_of_range() {
        let p = pt(1.0, 0.0, 0.0);
        let q = pt(0.0, 1.0, 0.0);
        assert!(matches!(
            point_on_geodesic(&p, &q, -0.1),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            point_on_geodesic(&p, &q, 2.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn cosine_side_octant() {
        let s = spherical_cosine_side(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2);
        assert!((s - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn cosine_side_degenerate_hinge() {
        let s = spherical_cosine_side(1.1, 0.4, 0.0);
        assert!((s - 0.7).abs() < 1e-12);
    }

    #[test]
    fn cosine_side_equal_weight_legs() {
        // legs of the equal-weight octant minimizer with the 120-degree
        // included angle close back onto a quarter arc
        let leg = (1.0 / 3.0f64.sqrt()).acos();
        let s = spherical_cosine_side(leg, leg, 2.0 * PI / 3.0);
        assert!((s - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn sine_law_octant() {
        assert!(sine_law_residual(&GeodesicTriangle::octant()) < 1e-12);
    }

    #[test]
    fn sine_law_near_degenerate_triangle() {
        // vertices within ~1e-3 arc of each other
        let e = 1e-3f64;
        let tri = GeodesicTriangle::new(
            pt(1.0, 0.0, 0.0),
            pt(e.cos(), e.sin(), 0.0),
            pt(e.cos(), 0.0, e.sin()),
        )
        .unwrap();
        let r = sine_law_residual(&tri);
        assert!(r.is_finite());
        assert!(r < 1e-6);
    }

    #[test]
    fn triangle_rejects_antipodal_vertices() {
        assert_eq!(
            GeodesicTriangle::new(pt(1.0, 0.0, 0.0), pt(-1.0, 0.0, 0.0), pt(0.0, 0.0, 1.0)),
            Err(Error::DegenerateTriangle)
        );
    }

    #[test]
    fn spherical_coords_round_trip() {
        let c = SphericalCoords::new(0.4, 5.0).unwrap();
        let back = SphericalCoords::from_point(&c.to_point());
        assert!((back.omega - 0.4).abs() < 1e-14);
        assert!((back.phi - 5.0).abs() < 1e-14);
    }

    #[test]
    fn unit_point_rejects_bad_input() {
        assert!(UnitPoint::new(0.0, 0.0, 0.0).is_err());
        assert!(UnitPoint::new(f64::NAN, 1.0, 0.0).is_err());
    }
}
