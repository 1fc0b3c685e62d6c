//! Closed-form weighted Fermat-Torricelli solution for the octant
//! triangle.
//!
//! Two independent routes are kept side by side:
//!
//! * [`solve_octant`] builds the minimizer from the cotangent products
//!   forced by the right-angle sides (`cot d_i * cot d_j = -cos a_i0j`)
//!   and is the route shipped in every [`FermatResult`];
//! * [`solve_octant_explicit`] evaluates the direct arccos-of-radical
//!   latitude/azimuth formulas without correction, and is
//!   exposed for comparison only. The azimuth halves agree to rounding
//!   ([`explicit_phi_residual`]); the latitude halves are compared against
//!   the numeric oracle by the test suite.

use crate::classifier;
use crate::math::{acos, acos_clamped, fabs, sqrt};
use crate::sphere::{geodesic_distance, GeodesicTriangle, SphericalCoords, UnitPoint};
use crate::{Error, Result};

/// Strictly positive weight triple attached to the three vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    w1: f64,
    w2: f64,
    w3: f64,
}

impl Weights {
    pub fn new(w1: f64, w2: f64, w3: f64) -> Result<Self> {
        for w in [w1, w2, w3] {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidWeights);
            }
        }
        Ok(Self { w1, w2, w3 })
    }

    pub fn w1(&self) -> f64 {
        self.w1
    }

    pub fn w2(&self) -> f64 {
        self.w2
    }

    pub fn w3(&self) -> f64 {
        self.w3
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.w1, self.w2, self.w3]
    }
}

/// The three angles under which the triangle sides are seen from an
/// interior minimizer. They always sum to `2*pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexAngles {
    alpha_102: f64,
    alpha_203: f64,
    alpha_103: f64,
}

impl VertexAngles {
    pub fn alpha_102(&self) -> f64 {
        self.alpha_102
    }

    pub fn alpha_203(&self) -> f64 {
        self.alpha_203
    }

    pub fn alpha_103(&self) -> f64 {
        self.alpha_103
    }

    pub fn sum(&self) -> f64 {
        self.alpha_102 + self.alpha_203 + self.alpha_103
    }
}

/// Where the minimizer sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FermatCase {
    /// Strictly inside the triangle.
    Interior,
    /// Coinciding with the given vertex (1-based).
    AbsorbedAt(usize),
}

/// A solved weighted Fermat-Torricelli point together with the quantities
/// the solvers certify.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermatResult {
    pub point: UnitPoint,
    pub coords: SphericalCoords,
    pub case: FermatCase,
    /// Weighted sum of the three arcs, recomputed from `distances`.
    pub objective: f64,
    /// Arcs from the solved point to the three vertices.
    pub distances: [f64; 3],
    /// Interior case: norm of the weighted unit-tangent sum at the point.
    /// Absorbed case: positive part of the absorbing vertex margin.
    pub stationarity_residual: f64,
}

impl FermatResult {
    pub(crate) fn at_interior(
        tri: &GeodesicTriangle,
        w: &Weights,
        point: UnitPoint,
    ) -> Result<Self> {
        let v = tri.vertices();
        let distances = [
            geodesic_distance(&point, &v[0]),
            geodesic_distance(&point, &v[1]),
            geodesic_distance(&point, &v[2]),
        ];
        let wa = w.as_array();
        let objective = wa[0] * distances[0] + wa[1] * distances[1] + wa[2] * distances[2];
        let residual = classifier::stationarity_residual(tri, w, &point)?;
        Ok(Self {
            point,
            coords: SphericalCoords::from_point(&point),
            case: FermatCase::Interior,
            objective,
            distances,
            stationarity_residual: residual,
        })
    }

    pub(crate) fn at_vertex(tri: &GeodesicTriangle, w: &Weights, vertex: usize) -> Self {
        let v = tri.vertices();
        let point = v[vertex - 1];
        let distances = [
            geodesic_distance(&point, &v[0]),
            geodesic_distance(&point, &v[1]),
            geodesic_distance(&point, &v[2]),
        ];
        let wa = w.as_array();
        let objective = wa[0] * distances[0] + wa[1] * distances[1] + wa[2] * distances[2];
        let margin = classifier::vertex_margin(tri, w, vertex - 1);
        Self {
            point,
            coords: SphericalCoords::from_point(&point),
            case: FermatCase::AbsorbedAt(vertex),
            objective,
            distances,
            stationarity_residual: if margin > 0.0 { margin } else { 0.0 },
        }
    }
}

/// Weighted sum of geodesic distances from `p` to the triangle vertices.
pub fn objective(tri: &GeodesicTriangle, w: &Weights, p: &UnitPoint) -> f64 {
    let v = tri.vertices();
    let wa = w.as_array();
    wa[0] * geodesic_distance(p, &v[0])
        + wa[1] * geodesic_distance(p, &v[1])
        + wa[2] * geodesic_distance(p, &v[2])
}

/// Cosines of the interior vertex angles, `[cos a102, cos a203, cos a103]`.
///
/// `cos a_i0j = (w_k^2 - w_i^2 - w_j^2) / (2 w_i w_j)`. Fails with
/// [`Error::NotFloating`] when a ratio leaves `[-1, 1]`, i.e. when the
/// weights violate the Euclidean triangle inequality and the minimizer is
/// absorbed.
pub(crate) fn angle_cosines(w: &Weights) -> Result<[f64; 3]> {
    let [w1, w2, w3] = w.as_array();
    let entries = [
        // (cosine, dominant vertex when ratio > 1, larger remaining weight)
        (
            (w3 * w3 - w1 * w1 - w2 * w2) / (2.0 * w1 * w2),
            3,
            if w1 >= w2 { 1 } else { 2 },
        ),
        (
            (w1 * w1 - w2 * w2 - w3 * w3) / (2.0 * w2 * w3),
            1,
            if w2 >= w3 { 2 } else { 3 },
        ),
        (
            (w2 * w2 - w1 * w1 - w3 * w3) / (2.0 * w1 * w3),
            2,
            if w1 >= w3 { 1 } else { 3 },
        ),
    ];
    let mut out = [0.0; 3];
    for (i, (c, high, low)) in entries.into_iter().enumerate() {
        if c > 1.0 {
            return Err(Error::NotFloating { vertex: high });
        }
        if c < -1.0 {
            return Err(Error::NotFloating { vertex: low });
        }
        out[i] = c;
    }
    Ok(out)
}

/// The angles under which an interior minimizer sees the three sides, as a
/// function of the weights alone.
pub fn vertex_angles_from_weights(w: &Weights) -> Result<VertexAngles> {
    let [c102, c203, c103] = angle_cosines(w)?;
    Ok(VertexAngles {
        alpha_102: acos(c102),
        alpha_203: acos(c203),
        alpha_103: acos(c103),
    })
}

/// `c_i = (w_j^2 + w_k^2 - w_i^2) / (2 w_j w_k)`; all strictly positive
/// exactly on the floating region of the octant triangle.
fn floating_cosines(w: &Weights) -> Result<[f64; 3]> {
    let [w1, w2, w3] = w.as_array();
    let c = [
        (w2 * w2 + w3 * w3 - w1 * w1) / (2.0 * w2 * w3),
        (w1 * w1 + w3 * w3 - w2 * w2) / (2.0 * w1 * w3),
        (w1 * w1 + w2 * w2 - w3 * w3) / (2.0 * w1 * w2),
    ];
    for (i, ci) in c.iter().enumerate() {
        if *ci <= 0.0 {
            return Err(Error::NotFloating { vertex: i + 1 });
        }
    }
    Ok(c)
}

/// Interior minimizer of the octant triangle from the cotangent-product
/// system.
///
/// With all octant sides at `pi/2`, the cosine law at the minimizer forces
/// `cot d_i * cot d_j = c_k`, so `cot d_i = sqrt(c_j c_k / c_i)` and the
/// point is `(x_1, x_2, x_3)` with `x_i = cos d_i`. Requires the strictly
/// floating regime `w_i^2 < w_j^2 + w_k^2` for every `i`.
pub fn solve_octant(w: &Weights) -> Result<FermatResult> {
    let [c1, c2, c3] = floating_cosines(w)?;
    let u = [sqrt(c2 * c3 / c1), sqrt(c1 * c3 / c2), sqrt(c1 * c2 / c3)];
    let x = [
        u[0] / sqrt(1.0 + u[0] * u[0]),
        u[1] / sqrt(1.0 + u[1] * u[1]),
        u[2] / sqrt(1.0 + u[2] * u[2]),
    ];
    let point = UnitPoint::new(x[0], x[1], x[2])?;
    FermatResult::at_interior(&GeodesicTriangle::octant(), w, point)
}

/// Latitude/azimuth of the octant minimizer evaluated through the direct
/// arccos-of-radical formulas, kept unmodified for cross-validation.
///
/// The azimuth radicand is `(w1^2 + w3^2 - w2^2) / (2 w3^2)`; the latitude
/// radicand divides `w1^2 + w2^2 - w3^2` by `2 w1 w2` and the sines of the
/// two angles at the minimizer that involve vertex 1. Exposed for
/// comparison against [`solve_octant`]; do not ship coordinates from here.
pub fn solve_octant_explicit(w: &Weights) -> Result<SphericalCoords> {
    floating_cosines(w)?;
    let [w1, w2, w3] = w.as_array();
    let [c102, _, c103] = angle_cosines(w)?;

    let phi_radicand = (w1 * w1 + w3 * w3 - w2 * w2) / (2.0 * w3 * w3);
    if !(0.0..=1.0 + 1e-12).contains(&phi_radicand) {
        return Err(Error::NumericalDomain);
    }
    let phi = acos_clamped(sqrt(phi_radicand));

    let sin_102 = sqrt(1.0 - c102 * c102);
    let sin_103 = sqrt(1.0 - c103 * c103);
    let omega_radicand = (w1 * w1 + w2 * w2 - w3 * w3) / (2.0 * w1 * w2 * sin_102 * sin_103);
    if !(0.0..=1.0 + 1e-12).contains(&omega_radicand) {
        return Err(Error::NumericalDomain);
    }
    let omega = acos_clamped(sqrt(omega_radicand));

    SphericalCoords::new(omega, phi)
}

/// Gap between the explicit azimuth formula and the cotangent-product
/// solution: `|cos^2(phi_explicit) - x1^2 / (x1^2 + x2^2)|`.
pub fn explicit_phi_residual(w: &Weights) -> Result<f64> {
    let [w1, w2, w3] = w.as_array();
    let result = solve_octant(w)?;
    let [x1, x2, _] = result.point.as_array();
    let phi_radicand = (w1 * w1 + w3 * w3 - w2 * w2) / (2.0 * w3 * w3);
    Ok(fabs(phi_radicand - x1 * x1 / (x1 * x1 + x2 * x2)))
}
