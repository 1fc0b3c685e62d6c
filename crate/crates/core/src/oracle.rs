//! Independent numeric minimizer of the weighted-distance objective over
//! the whole sphere.
//!
//! A deterministic Fibonacci lattice scan picks the best seed, projected
//! gradient descent with Armijo backtracking refines it, and a curvature
//! (Newton) polish drives the gradient norm to tolerance once the
//! objective differences fall under floating-point resolution. The three
//! vertices are always evaluated directly, so the vertex-absorbed case
//! never depends on descent behavior near the nonsmooth points.

use alloc::vec::Vec;

use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::closed_form::{objective, FermatResult, Weights};
use crate::math::vec3;
use crate::math::{acos_clamped, cos, fabs, sin, sqrt};
use crate::sphere::{
    geodesic_distance, GeodesicTriangle, SphericalCoords, TangentVector, UnitPoint,
};
use crate::{Error, Result};

/// Knobs for [`minimize`]. The defaults are what every cross-check in the
/// crate uses; all tolerances must be strictly positive and the lattice
/// needs at least 12 points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Fibonacci lattice size for the global scan.
    pub scan_points: usize,
    /// Total iteration budget for the local refinement.
    pub max_iters: usize,
    /// Initial Armijo trial step in radians.
    pub step_init: f64,
    /// Gradient-norm tolerance declaring convergence.
    pub tol_grad: f64,
    /// Terminal points closer than this arc to a vertex snap onto it.
    pub vertex_snap: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            scan_points: 20_000,
            max_iters: 500,
            step_init: 0.5,
            tol_grad: 1e-10,
            vertex_snap: 1e-6,
        }
    }
}

impl OracleOptions {
    fn validate(&self) {
        assert!(self.scan_points >= 12, "scan_points must be at least 12");
        assert!(self.max_iters > 0, "max_iters must be positive");
        assert!(self.step_init > 0.0, "step_init must be positive");
        assert!(self.tol_grad > 0.0, "tol_grad must be positive");
        assert!(self.vertex_snap > 0.0, "vertex_snap must be positive");
    }
}

/// One sample of the objective landscape emitted by [`grid_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub omega: f64,
    pub phi: f64,
    pub objective: f64,
}

/// Terminal state of one descent run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentOutcome {
    pub point: UnitPoint,
    pub grad_norm: f64,
    pub iterations: usize,
    /// Set when the iterate walked inside the vertex-snap radius; the
    /// point is then the exact vertex (1-based).
    pub snapped_vertex: Option<usize>,
}

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653; // pi * (3 - sqrt(5))
const ARMIJO_SLOPE: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
/// Below this gradient norm, Armijo acceptance drowns in objective
/// rounding, so the polish phase takes over.
const POLISH_SWITCH: f64 = 1e-5;

/// Deterministic near-uniform sample of the sphere.
pub fn fibonacci_lattice(n: usize) -> Vec<UnitPoint> {
    assert!(n >= 1);
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
        let r = sqrt((1.0 - z * z).max(0.0));
        let theta = GOLDEN_ANGLE * i as f64;
        points.push(
            UnitPoint::new(r * cos(theta), r * sin(theta), z)
                .expect("lattice points are unit vectors"),
        );
    }
    points
}

/// Riemannian gradient of the objective at `p`: the tangent vector
/// `sum_i w_i * (cos d_i * p - A_i) / sin d_i`.
///
/// Undefined within 1e-9 arc of a vertex (or its antipode), where the
/// distance term is nonsmooth.
pub fn gradient(tri: &GeodesicTriangle, w: &Weights, p: &UnitPoint) -> Result<TangentVector> {
    let v = tri.vertices();
    let wa = w.as_array();
    let pa = p.as_array();
    let mut g = [0.0; 3];
    for i in 0..3 {
        let dot = p.dot(&v[i]);
        let d = acos_clamped(dot);
        let sin_d = sin(d);
        if sin_d < 1e-9 {
            return Err(Error::DegenerateDirection);
        }
        let term = vec3::scale(
            vec3::sub(vec3::scale(pa, dot), v[i].as_array()),
            wa[i] / sin_d,
        );
        g = vec3::add(g, term);
    }
    // project out the radial component left by rounding
    let radial = vec3::dot(g, pa);
    g = vec3::sub(g, vec3::scale(pa, radial));
    Ok(TangentVector::new(*p, g))
}

fn nearest_vertex_within(tri: &GeodesicTriangle, p: &UnitPoint, snap: f64) -> Option<usize> {
    let v = tri.vertices();
    let mut best: Option<(usize, f64)> = None;
    for (i, vertex) in v.iter().enumerate() {
        let d = geodesic_distance(p, vertex);
        if d < snap && best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i + 1)
}

/// Orthonormal tangent basis at `p`, chosen deterministically.
fn tangent_basis(p: &UnitPoint) -> ([f64; 3], [f64; 3]) {
    let pa = p.as_array();
    let mut axis = [0.0; 3];
    let k = {
        let a = [fabs(pa[0]), fabs(pa[1]), fabs(pa[2])];
        if a[0] <= a[1] && a[0] <= a[2] {
            0
        } else if a[1] <= a[2] {
            1
        } else {
            2
        }
    };
    axis[k] = 1.0;
    let e1 = vec3::cross(axis, pa);
    let e1 = vec3::scale(e1, 1.0 / vec3::norm(e1));
    let e2 = vec3::cross(pa, e1);
    (e1, e2)
}

fn retract(p: &UnitPoint, step: [f64; 3]) -> UnitPoint {
    UnitPoint::from_array(vec3::add(p.as_array(), step))
        .expect("tangent step keeps the vector away from the origin")
}

/// Curvature polish: damped Newton steps in the 2-D tangent plane using
/// the analytic Hessian `sum_i w_i cot(d_i) (I - u_i u_i^T)`. Acceptance
/// is by gradient-norm decrease, which stays meaningful below the
/// objective's rounding floor.
fn polish_step(
    tri: &GeodesicTriangle,
    w: &Weights,
    p: &UnitPoint,
    grad: &TangentVector,
) -> Option<UnitPoint> {
    let v = tri.vertices();
    let wa = w.as_array();
    let (e1, e2) = tangent_basis(p);
    let g2 = [
        vec3::dot(grad.direction(), e1),
        vec3::dot(grad.direction(), e2),
    ];

    let mut h11 = 0.0;
    let mut h12 = 0.0;
    let mut h22 = 0.0;
    for i in 0..3 {
        let dot = p.dot(&v[i]);
        let d = acos_clamped(dot);
        let sin_d = sin(d);
        if sin_d < 1e-9 {
            return None;
        }
        let u = vec3::scale(
            vec3::sub(v[i].as_array(), vec3::scale(p.as_array(), dot)),
            1.0 / sin_d,
        );
        let u1 = vec3::dot(u, e1);
        let u2 = vec3::dot(u, e2);
        let cot = dot / sin_d;
        h11 += wa[i] * cot * (1.0 - u1 * u1);
        h12 += wa[i] * cot * (-u1 * u2);
        h22 += wa[i] * cot * (1.0 - u2 * u2);
    }

    // shift the spectrum positive if the Hessian is indefinite
    let tr = h11 + h22;
    let det = h11 * h22 - h12 * h12;
    let disc = sqrt((tr * tr - 4.0 * det).max(0.0));
    let eig_min = 0.5 * (tr - disc);
    let floor = 1e-9 * fabs(tr).max(1.0);
    if eig_min < floor {
        let shift = floor - eig_min;
        h11 += shift;
        h22 += shift;
    }

    let det = h11 * h22 - h12 * h12;
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let mut s1 = (-g2[0] * h22 + g2[1] * h12) / det;
    let mut s2 = (-g2[1] * h11 + g2[0] * h12) / det;
    let len = sqrt(s1 * s1 + s2 * s2);
    if !len.is_finite() {
        return None;
    }
    if len > 0.5 {
        s1 *= 0.5 / len;
        s2 *= 0.5 / len;
    }
    Some(retract(
        p,
        vec3::add(vec3::scale(e1, s1), vec3::scale(e2, s2)),
    ))
}

/// One accepted Armijo backtracking step, or `None` when no step achieves
/// the sufficient decrease (the objective differences are then below
/// floating-point resolution).
fn try_armijo(
    tri: &GeodesicTriangle,
    w: &Weights,
    p: &UnitPoint,
    grad: &TangentVector,
    gn: f64,
    step_init: f64,
) -> Option<UnitPoint> {
    let f0 = objective(tri, w, p);
    let mut t = step_init;
    while t > 1e-18 {
        let cand = retract(p, vec3::scale(grad.direction(), -t));
        if objective(tri, w, &cand) <= f0 - ARMIJO_SLOPE * t * gn * gn {
            return Some(cand);
        }
        t *= BACKTRACK;
    }
    None
}

/// One accepted polish step: the damped-Newton candidate, halved toward
/// the current point until the gradient norm decreases.
fn try_polish(
    tri: &GeodesicTriangle,
    w: &Weights,
    p: &UnitPoint,
    grad: &TangentVector,
    gn: f64,
) -> Option<UnitPoint> {
    let mut cand = polish_step(tri, w, p, grad)?;
    for _ in 0..30 {
        match gradient(tri, w, &cand) {
            Ok(g_new) if g_new.norm() < gn => return Some(cand),
            // a candidate inside the nonsmooth vertex region also counts:
            // the caller's snap check will absorb it
            Err(_) => return Some(cand),
            _ => {
                let half = vec3::scale(vec3::add(cand.as_array(), p.as_array()), 0.5);
                cand = UnitPoint::from_array(half).ok()?;
            }
        }
    }
    None
}

/// Iterations of plain Armijo descent before the curvature polish engages
/// regardless of gradient norm; ill-conditioned near-vertex minima need
/// the second-order step long before the norm reaches `POLISH_SWITCH`.
const ARMIJO_BUDGET: usize = 150;

/// Projected gradient descent from `start`: Armijo backtracking for the
/// global phase, damped-Newton polish for the endgame.
pub fn descend(
    tri: &GeodesicTriangle,
    w: &Weights,
    start: &UnitPoint,
    opts: &OracleOptions,
) -> DescentOutcome {
    opts.validate();
    let snapped = |p: UnitPoint, iters: usize| {
        let v = tri.vertices();
        let mut i = 1;
        let mut best = geodesic_distance(&p, &v[0]);
        for (idx, vertex) in v.iter().enumerate().skip(1) {
            let d = geodesic_distance(&p, vertex);
            if d < best {
                best = d;
                i = idx + 1;
            }
        }
        DescentOutcome {
            point: tri.vertex(i),
            grad_norm: 0.0,
            iterations: iters,
            snapped_vertex: Some(i),
        }
    };

    let mut p = *start;
    let mut iters = 0usize;

    loop {
        if nearest_vertex_within(tri, &p, opts.vertex_snap).is_some() {
            return snapped(p, iters);
        }
        let grad = match gradient(tri, w, &p) {
            Ok(g) => g,
            Err(_) => {
                // the gradient is undefined near a vertex or its antipode;
                // only the vertex side snaps
                if nearest_vertex_within(tri, &p, 1e-5).is_some() {
                    return snapped(p, iters);
                }
                return DescentOutcome {
                    point: p,
                    grad_norm: f64::INFINITY,
                    iterations: iters,
                    snapped_vertex: None,
                };
            }
        };
        let gn = grad.norm();
        if gn <= opts.tol_grad || iters >= opts.max_iters {
            return DescentOutcome {
                point: p,
                grad_norm: gn,
                iterations: iters,
                snapped_vertex: None,
            };
        }

        let polish_first = gn <= POLISH_SWITCH || iters >= ARMIJO_BUDGET;
        let next = if polish_first {
            try_polish(tri, w, &p, &grad, gn)
                .or_else(|| try_armijo(tri, w, &p, &grad, gn, opts.step_init))
        } else {
            try_armijo(tri, w, &p, &grad, gn, opts.step_init)
                .or_else(|| try_polish(tri, w, &p, &grad, gn))
        };
        match next {
            Some(point) => {
                p = point;
                iters += 1;
            }
            None => {
                return DescentOutcome {
                    point: p,
                    grad_norm: gn,
                    iterations: iters,
                    snapped_vertex: None,
                }
            }
        }
    }
}

/// Global minimizer of the weighted-distance objective.
///
/// Scans the Fibonacci lattice, descends from the best seed, evaluates the
/// three vertices directly, and returns the best terminal point. Terminals
/// within `vertex_snap` of a vertex come back absorbed at the exact
/// vertex; interior terminals must reach a gradient norm below
/// `10 * tol_grad` or [`Error::NoConvergence`] reports the best iterate.
pub fn minimize(tri: &GeodesicTriangle, w: &Weights, opts: &OracleOptions) -> Result<FermatResult> {
    opts.validate();

    let mut best_seed = None;
    for p in fibonacci_lattice(opts.scan_points) {
        let f = objective(tri, w, &p);
        match best_seed {
            Some((_, bf)) if bf <= f => {}
            _ => best_seed = Some((p, f)),
        }
    }
    let (seed, _) = best_seed.expect("lattice is non-empty");

    let outcome = descend(tri, w, &seed, opts);

    let mut winner = outcome.point;
    let mut winner_f = objective(tri, w, &outcome.point);
    for v in tri.vertices() {
        let f = objective(tri, w, &v);
        if f < winner_f {
            winner = v;
            winner_f = f;
        }
    }

    if let Some(i) = nearest_vertex_within(tri, &winner, opts.vertex_snap) {
        return Ok(FermatResult::at_vertex(tri, w, i));
    }

    // interior winner is necessarily the descent terminal
    let residual = outcome.grad_norm;
    if residual > 10.0 * opts.tol_grad {
        return Err(Error::NoConvergence {
            best: winner.as_array(),
            residual,
        });
    }
    FermatResult::at_interior(tri, w, winner)
}

/// Regular latitude/azimuth sample of the objective, `resolution^2` rows
/// in row-major omega-then-phi order. Deterministic for fixed inputs.
pub fn grid_scan(tri: &GeodesicTriangle, w: &Weights, resolution: usize) -> Vec<GridRow> {
    assert!(resolution >= 2, "resolution must be at least 2");
    let n = resolution;
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        let omega = -FRAC_PI_2 + PI * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let phi = TAU * j as f64 / n as f64;
            let p = SphericalCoords { omega, phi }.to_point();
            rows.push(GridRow {
                omega,
                phi,
                objective: objective(tri, w, &p),
            });
        }
    }
    rows
}
