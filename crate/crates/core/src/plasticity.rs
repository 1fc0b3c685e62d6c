//! Triangle shrinking that preserves the weighted Fermat-Torricelli point,
//! and the inverse problem.
//!
//! Sliding each vertex along its geodesic toward the interior minimizer
//! (keeping the weights) leaves the minimizer fixed. The shrunken sides
//! then follow from the spherical cosine law at the minimizer, whose
//! vertex angles depend on the weights alone ([`predicted_sides`]).
//! Inverting that relation — find arc offsets producing prescribed sides —
//! is done two ways: damped Newton on the three cosine equations
//! ([`invert_sides_newton`]) and a tangent half-angle reduction to nested
//! quadratics plus a one-dimensional root scan
//! ([`invert_sides_weierstrass`]).

use alloc::vec::Vec;

use core::f64::consts::FRAC_PI_2;

use crate::classifier::{classify, CaseLabel};
use crate::closed_form::{angle_cosines, Weights};
use crate::math::{acos_clamped, atan, cos, fabs, sin, sqrt, tan};
use crate::oracle::{minimize, OracleOptions};
use crate::sphere::{geodesic_distance, point_on_geodesic, GeodesicTriangle, UnitPoint};
use crate::{Error, Result};

/// Non-negative arc lengths to slide each vertex toward the minimizer.
/// Use-site checks keep every offset strictly below the corresponding
/// vertex-to-minimizer arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkOffsets {
    a: f64,
    b: f64,
    c: f64,
}

impl ShrinkOffsets {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for v in [a, b, c] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidOffsets);
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }
}

/// Side triple `(s12, s23, s13)` of an admissible shrunken triangle; each
/// side lies in `(0, pi/2]`, with `pi/2` only reached by the unshrunk
/// octant triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSides {
    s12: f64,
    s23: f64,
    s13: f64,
}

impl TriangleSides {
    pub fn new(s12: f64, s23: f64, s13: f64) -> Result<Self> {
        for s in [s12, s23, s13] {
            if !s.is_finite() || s <= 0.0 || s > FRAC_PI_2 + 1e-9 {
                return Err(Error::OutOfRange {
                    value: s,
                    max: FRAC_PI_2,
                });
            }
        }
        Ok(Self { s12, s23, s13 })
    }

    /// Measured sides of an existing triangle.
    pub fn from_triangle(tri: &GeodesicTriangle) -> Result<Self> {
        let [s12, s23, s13] = tri.sides();
        Self::new(s12, s23, s13)
    }

    pub fn s12(&self) -> f64 {
        self.s12
    }

    pub fn s23(&self) -> f64 {
        self.s23
    }

    pub fn s13(&self) -> f64 {
        self.s13
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.s12, self.s23, self.s13]
    }
}

/// Tangent half-angle image of an offset triple: `t_x = tan(x / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfAngleTriple {
    pub t_a: f64,
    pub t_b: f64,
    pub t_c: f64,
}

impl HalfAngleTriple {
    pub fn from_offsets(off: &ShrinkOffsets) -> Self {
        Self {
            t_a: tan(off.a() / 2.0),
            t_b: tan(off.b() / 2.0),
            t_c: tan(off.c() / 2.0),
        }
    }

    pub fn to_offsets(&self) -> Result<ShrinkOffsets> {
        ShrinkOffsets::new(
            2.0 * atan(self.t_a),
            2.0 * atan(self.t_b),
            2.0 * atan(self.t_c),
        )
    }
}

/// Scan statistics for one of the four quadratic-branch combinations of
/// the tangent half-angle solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchScan {
    /// Upper quadratic root chosen for the first offset.
    pub first_root_upper: bool,
    /// Upper quadratic root chosen for the third offset.
    pub third_root_upper: bool,
    /// Samples where both quadratics had real roots and the residual was
    /// finite.
    pub valid_samples: usize,
    /// Sign changes bracketed during the scan.
    pub sign_changes: usize,
    /// Brackets whose root failed the feasibility or residual filter.
    pub rejected_roots: usize,
}

/// `cos` of the side spanned by legs `l1`, `l2` with included-angle cosine
/// `k`.
fn side_cosine(l1: f64, l2: f64, k: f64) -> f64 {
    cos(l1) * cos(l2) + sin(l1) * sin(l2) * k
}

fn leg(a0: f64, off: f64) -> f64 {
    a0 - off
}

fn validate_arcs(a0: [f64; 3]) -> Result<()> {
    for v in a0 {
        if !v.is_finite() || v <= 0.0 || v > FRAC_PI_2 + 1e-9 {
            return Err(Error::OutOfRange {
                value: v,
                max: FRAC_PI_2,
            });
        }
    }
    Ok(())
}

/// Sides of the shrunken triangle predicted by the cosine law at the
/// minimizer, given the base arcs `a0 = (a01, a02, a03)`, the offsets, and
/// the weights (which fix the angles at the minimizer).
pub fn predicted_sides(a0: [f64; 3], off: &ShrinkOffsets, w: &Weights) -> Result<TriangleSides> {
    validate_arcs(a0)?;
    let [k12, k23, k13] = angle_cosines(w)?;
    let offs = off.as_array();
    let mut legs = [0.0; 3];
    for i in 0..3 {
        legs[i] = leg(a0[i], offs[i]);
        if legs[i] <= 0.0 || legs[i] > FRAC_PI_2 + 1e-9 {
            return Err(Error::OutOfRange {
                value: legs[i],
                max: FRAC_PI_2,
            });
        }
    }
    let raw = [
        side_cosine(legs[0], legs[1], k12),
        side_cosine(legs[1], legs[2], k23),
        side_cosine(legs[0], legs[2], k13),
    ];
    for r in raw {
        if fabs(r) > 1.0 + 1e-9 {
            return Err(Error::NumericalDomain);
        }
    }
    TriangleSides::new(
        acos_clamped(raw[0]),
        acos_clamped(raw[1]),
        acos_clamped(raw[2]),
    )
}

/// Residuals of the three cosine equations at the given offsets:
/// `cos(predicted side) - cos(target side)`, ordered `(12, 23, 13)`.
pub fn side_equation_residuals(
    a0: [f64; 3],
    off: &ShrinkOffsets,
    w: &Weights,
    target: &TriangleSides,
) -> Result<[f64; 3]> {
    let [k12, k23, k13] = angle_cosines(w)?;
    let offs = off.as_array();
    let legs = [
        leg(a0[0], offs[0]),
        leg(a0[1], offs[1]),
        leg(a0[2], offs[2]),
    ];
    Ok([
        side_cosine(legs[0], legs[1], k12) - cos(target.s12()),
        side_cosine(legs[1], legs[2], k23) - cos(target.s23()),
        side_cosine(legs[0], legs[2], k13) - cos(target.s13()),
    ])
}

/// Slide each vertex of `tri` toward the explicit minimizer `fermat` by
/// the given offsets. Every offset must stay strictly below its
/// vertex-to-minimizer arc.
pub fn shrink_triangle_about(
    tri: &GeodesicTriangle,
    fermat: &UnitPoint,
    off: &ShrinkOffsets,
) -> Result<GeodesicTriangle> {
    let v = tri.vertices();
    let offs = off.as_array();
    let mut moved = [v[0]; 3];
    for i in 0..3 {
        let arc = geodesic_distance(&v[i], fermat);
        if offs[i] >= arc {
            return Err(Error::OffsetTooLarge { index: i + 1 });
        }
        moved[i] = point_on_geodesic(&v[i], fermat, offs[i])?;
    }
    GeodesicTriangle::new(moved[0], moved[1], moved[2])
}

/// Shrink `tri` toward its own weighted Fermat-Torricelli point (located
/// by the numeric minimizer). The result has the same minimizer.
pub fn shrink_triangle(
    tri: &GeodesicTriangle,
    w: &Weights,
    off: &ShrinkOffsets,
) -> Result<GeodesicTriangle> {
    let decision = classify(tri, w)?;
    if let CaseLabel::AbsorbedAt(i) = decision.label {
        return Err(Error::NotFloating { vertex: i });
    }
    let base = minimize(tri, w, &OracleOptions::default())?;
    shrink_triangle_about(tri, &base.point, off)
}

fn solve3(mut m: [[f64; 3]; 3], mut rhs: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let mut pivot = col;
        for row in (col + 1)..3 {
            if fabs(m[row][col]) > fabs(m[pivot][col]) {
                pivot = row;
            }
        }
        if fabs(m[pivot][col]) < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let lead = m[col];
        for row in (col + 1)..3 {
            let f = m[row][col] / lead[col];
            for (k, l) in lead.iter().enumerate().skip(col) {
                m[row][k] -= f * l;
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 3];
    for col in (0..3).rev() {
        let mut acc = rhs[col];
        for k in (col + 1)..3 {
            acc -= m[col][k] * x[k];
        }
        x[col] = acc / m[col][col];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITERS: usize = 60;
const JACOBIAN_H: f64 = 1e-7;
/// Converged offsets may undershoot zero by rounding; anything this close
/// is clamped to zero, anything worse is infeasible.
const FEASIBILITY_SLACK: f64 = 1e-9;

fn inf_norm(r: [f64; 3]) -> f64 {
    fabs(r[0]).max(fabs(r[1])).max(fabs(r[2]))
}

fn feasible_offsets(raw: [f64; 3], a0: [f64; 3]) -> Option<ShrinkOffsets> {
    let mut out = [0.0; 3];
    for i in 0..3 {
        let v = if raw[i] < 0.0 && raw[i] > -FEASIBILITY_SLACK {
            0.0
        } else {
            raw[i]
        };
        if v < 0.0 || a0[i] - v < 1e-12 {
            return None;
        }
        out[i] = v;
    }
    ShrinkOffsets::new(out[0], out[1], out[2]).ok()
}

/// Newton iteration on the three cosine equations with a finite-difference
/// Jacobian, multistarted from an equal-angle estimate and three scalings
/// of the base arcs. Converges to residual infinity-norm below `1e-12`.
pub fn invert_sides_newton(
    target: &TriangleSides,
    w: &Weights,
    a0: [f64; 3],
) -> Result<ShrinkOffsets> {
    validate_arcs(a0)?;
    let [k12, k23, k13] = angle_cosines(w)?;
    let tc = [cos(target.s12()), cos(target.s23()), cos(target.s13())];
    let residual = |off: [f64; 3]| -> [f64; 3] {
        let legs = [a0[0] - off[0], a0[1] - off[1], a0[2] - off[2]];
        [
            side_cosine(legs[0], legs[1], k12) - tc[0],
            side_cosine(legs[1], legs[2], k23) - tc[1],
            side_cosine(legs[0], legs[2], k13) - tc[2],
        ]
    };

    // equal-angle estimate: all angles at the minimizer average 2*pi/3,
    // so a common leg solves cos(s) = cos^2(l) - sin^2(l)/2
    let mean_cos = (tc[0] + tc[1] + tc[2]) / 3.0;
    let common_leg = acos_clamped(sqrt(((mean_cos + 0.5) / 1.5).max(0.0)));
    let mut starts = [[0.0; 3]; 4];
    for i in 0..3 {
        starts[0][i] = (a0[i] - common_leg).max(0.0).min(0.999 * a0[i]);
    }
    for (si, scale) in [0.1, 0.5, 0.9].iter().enumerate() {
        for i in 0..3 {
            starts[si + 1][i] = scale * a0[i];
        }
    }

    let mut best: Option<([f64; 3], f64)> = None;
    let mut converged_infeasible = false;
    for start in starts {
        let mut x = start;
        for _ in 0..NEWTON_MAX_ITERS {
            let f = residual(x);
            let norm = inf_norm(f);
            if best.as_ref().is_none_or(|(_, bn)| norm < *bn) {
                best = Some((x, norm));
            }
            if norm < NEWTON_TOL {
                match feasible_offsets(x, a0) {
                    Some(off) => return Ok(off),
                    None => {
                        converged_infeasible = true;
                        break;
                    }
                }
            }
            let mut jac = [[0.0; 3]; 3];
            for j in 0..3 {
                let mut hi = x;
                let mut lo = x;
                hi[j] += JACOBIAN_H;
                lo[j] -= JACOBIAN_H;
                let fh = residual(hi);
                let fl = residual(lo);
                for r in 0..3 {
                    jac[r][j] = (fh[r] - fl[r]) / (2.0 * JACOBIAN_H);
                }
            }
            let neg_f = [-f[0], -f[1], -f[2]];
            let Some(step) = solve3(jac, neg_f) else {
                break;
            };
            for j in 0..3 {
                x[j] += step[j];
            }
            if inf_norm(x) > 10.0 {
                break;
            }
        }
    }

    if converged_infeasible {
        return Err(Error::InfeasibleTarget);
    }
    let (best_x, best_norm) = best.expect("at least one start evaluated");
    Err(Error::NoConvergence {
        best: best_x,
        residual: best_norm,
    })
}

/// `P(t) = c0 (1 - t^2) + 2 s0 t` and `Q(t) = s0 (1 - t^2) - 2 c0 t`:
/// numerators of `cos(a0 - x)` and `sin(a0 - x)` under `t = tan(x/2)`,
/// both over the common denominator `1 + t^2`.
fn half_angle_pq(c0: f64, s0: f64, t: f64) -> (f64, f64) {
    let one_minus = 1.0 - t * t;
    (c0 * one_minus + 2.0 * s0 * t, s0 * one_minus - 2.0 * c0 * t)
}

/// Ascending real roots of `A t^2 + B t + D = 0`; `None` entries when no
/// real root exists on that branch.
fn quadratic_roots(a: f64, b: f64, d: f64) -> [Option<f64>; 2] {
    let scale = fabs(a) + fabs(b) + fabs(d);
    if scale == 0.0 || !scale.is_finite() {
        return [None, None];
    }
    if fabs(a) <= 1e-14 * scale {
        if fabs(b) <= 1e-14 * scale {
            return [None, None];
        }
        let r = -d / b;
        return [Some(r), Some(r)];
    }
    let disc = b * b - 4.0 * a * d;
    if disc < 0.0 {
        return [None, None];
    }
    let sq = sqrt(disc);
    let q = if b >= 0.0 {
        -(b + sq) / 2.0
    } else {
        -(b - sq) / 2.0
    };
    let r1 = q / a;
    let r2 = if q != 0.0 { d / q } else { r1 };
    if r1 <= r2 {
        [Some(r1), Some(r2)]
    } else {
        [Some(r2), Some(r1)]
    }
}

struct HalfAngleSystem {
    /// cos/sin of the three base arcs.
    trig: [(f64, f64); 3],
    /// included-angle cosines `(k12, k23, k13)`.
    k: [f64; 3],
    /// cosines of the target sides.
    tc: [f64; 3],
}

impl HalfAngleSystem {
    /// Roots in `t_a` of the first equation for a given `t_b`.
    fn first_roots(&self, t_b: f64) -> [Option<f64>; 2] {
        let (c01, s01) = self.trig[0];
        let (p2, q2) = half_angle_pq(self.trig[1].0, self.trig[1].1, t_b);
        let lhs = self.tc[0] * (1.0 + t_b * t_b);
        let a = lhs + c01 * p2 + self.k[0] * s01 * q2;
        let b = -2.0 * s01 * p2 + 2.0 * c01 * self.k[0] * q2;
        let d = lhs - c01 * p2 - self.k[0] * s01 * q2;
        quadratic_roots(a, b, d)
    }

    /// Roots in `t_c` of the second equation for a given `t_b`.
    fn third_roots(&self, t_b: f64) -> [Option<f64>; 2] {
        let (c03, s03) = self.trig[2];
        let (p2, q2) = half_angle_pq(self.trig[1].0, self.trig[1].1, t_b);
        let lhs = self.tc[1] * (1.0 + t_b * t_b);
        let a = lhs + c03 * p2 + self.k[1] * s03 * q2;
        let b = -2.0 * s03 * p2 + 2.0 * c03 * self.k[1] * q2;
        let d = lhs - c03 * p2 - self.k[1] * s03 * q2;
        quadratic_roots(a, b, d)
    }

    /// Residual of the remaining equation at a branch-resolved sample.
    fn closing_residual(&self, t_a: f64, t_c: f64) -> f64 {
        let (c01, s01) = self.trig[0];
        let (c03, s03) = self.trig[2];
        let p1 = c01 * (1.0 - t_a * t_a) + 2.0 * s01 * t_a;
        let q1 = s01 * (1.0 - t_a * t_a) - 2.0 * c01 * t_a;
        let p3 = c03 * (1.0 - t_c * t_c) + 2.0 * s03 * t_c;
        let q3 = s03 * (1.0 - t_c * t_c) - 2.0 * c03 * t_c;
        self.tc[2] * (1.0 + t_a * t_a) * (1.0 + t_c * t_c) - (p1 * p3 + self.k[2] * q1 * q3)
    }

    fn sample(&self, t_b: f64, first_upper: bool, third_upper: bool) -> Option<(f64, f64, f64)> {
        let ra = self.first_roots(t_b)[first_upper as usize]?;
        let rc = self.third_roots(t_b)[third_upper as usize]?;
        let g = self.closing_residual(ra, rc);
        if g.is_finite() {
            Some((ra, rc, g))
        } else {
            None
        }
    }
}

const SCAN_SAMPLES: usize = 2000;
const BISECT_TOL: f64 = 1e-13;
const WEIERSTRASS_RESIDUAL_TOL: f64 = 1e-10;

/// Tangent half-angle solver for the inverse problem.
///
/// Substituting `t_x = tan(x/2)` turns each cosine equation into a
/// quadratic: the first in `t_a` over `t_b`, the second in `t_c` over
/// `t_b`. For each of the four root-branch combinations the remaining
/// equation becomes a scalar function of `t_b`, root-found by a
/// 2000-sample sign-change scan over `t_b in (0, tan(a02/2))` plus
/// bisection. All feasible solutions (offset bounds satisfied, original
/// residuals below `1e-10`) are returned sorted by the middle offset; no
/// uniqueness is implied.
pub fn invert_sides_weierstrass(
    target: &TriangleSides,
    w: &Weights,
    a0: [f64; 3],
) -> Result<Vec<ShrinkOffsets>> {
    validate_arcs(a0)?;
    let k = angle_cosines(w)?;
    let system = HalfAngleSystem {
        trig: [
            (cos(a0[0]), sin(a0[0])),
            (cos(a0[1]), sin(a0[1])),
            (cos(a0[2]), sin(a0[2])),
        ],
        k,
        tc: [cos(target.s12()), cos(target.s23()), cos(target.s13())],
    };

    let t_max = tan(a0[1] / 2.0);
    let mut scans = [BranchScan {
        first_root_upper: false,
        third_root_upper: false,
        valid_samples: 0,
        sign_changes: 0,
        rejected_roots: 0,
    }; 4];
    let mut found: Vec<(f64, ShrinkOffsets)> = Vec::new();

    for (bi, (fu, tu)) in [(false, false), (false, true), (true, false), (true, true)]
        .into_iter()
        .enumerate()
    {
        let scan = &mut scans[bi];
        scan.first_root_upper = fu;
        scan.third_root_upper = tu;

        let mut prev: Option<(f64, f64)> = None;
        for j in 0..=SCAN_SAMPLES {
            let t_b = t_max * j as f64 / SCAN_SAMPLES as f64;
            let Some((_, _, g)) = system.sample(t_b, fu, tu) else {
                prev = None;
                continue;
            };
            scan.valid_samples += 1;
            if g == 0.0 {
                if !accept_root(&system, t_b, fu, tu, a0, w, target, &mut found) {
                    scan.rejected_roots += 1;
                }
                prev = Some((t_b, g));
                continue;
            }
            if let Some((t_prev, g_prev)) = prev {
                if g_prev != 0.0 && (g_prev < 0.0) != (g < 0.0) {
                    scan.sign_changes += 1;
                    match bisect_root(&system, t_prev, g_prev, t_b, fu, tu) {
                        Some(root) => {
                            if !accept_root(&system, root, fu, tu, a0, w, target, &mut found) {
                                scan.rejected_roots += 1;
                            }
                        }
                        None => scan.rejected_roots += 1,
                    }
                }
            }
            prev = Some((t_b, g));
        }
    }

    found.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite scan roots"));
    let mut solutions: Vec<ShrinkOffsets> = Vec::new();
    for (_, off) in found {
        let duplicate = solutions.iter().any(|s| {
            let a = s.as_array();
            let b = off.as_array();
            fabs(a[0] - b[0]) < 1e-8 && fabs(a[1] - b[1]) < 1e-8 && fabs(a[2] - b[2]) < 1e-8
        });
        if !duplicate {
            solutions.push(off);
        }
    }

    if solutions.is_empty() {
        return Err(Error::NoRealSolution {
            scans: alloc::boxed::Box::new(scans),
        });
    }
    Ok(solutions)
}

fn bisect_root(
    system: &HalfAngleSystem,
    mut lo: f64,
    mut g_lo: f64,
    mut hi: f64,
    first_upper: bool,
    third_upper: bool,
) -> Option<f64> {
    for _ in 0..200 {
        if hi - lo < BISECT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let (_, _, g_mid) = system.sample(mid, first_upper, third_upper)?;
        if g_mid == 0.0 {
            return Some(mid);
        }
        if (g_mid < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[allow(clippy::too_many_arguments)]
fn accept_root(
    system: &HalfAngleSystem,
    t_b: f64,
    first_upper: bool,
    third_upper: bool,
    a0: [f64; 3],
    w: &Weights,
    target: &TriangleSides,
    found: &mut Vec<(f64, ShrinkOffsets)>,
) -> bool {
    let Some((t_a, t_c, _)) = system.sample(t_b, first_upper, third_upper) else {
        return false;
    };
    let raw = [2.0 * atan(t_a), 2.0 * atan(t_b), 2.0 * atan(t_c)];
    let Some(off) = feasible_offsets(raw, a0) else {
        return false;
    };
    let Ok(res) = side_equation_residuals(a0, &off, w, target) else {
        return false;
    };
    if inf_norm(res) >= WEIERSTRASS_RESIDUAL_TOL {
        return false;
    }
    found.push((t_b, off));
    true
}
