//! Floating/absorbed classification for an arbitrary geodesic triangle.
//!
//! Each vertex gets a margin `||w_j U_ij + w_k U_ik|| - w_i` built from the
//! unit tangents of the two sides meeting there. All margins strictly
//! positive means the minimizer floats in the interior; a non-positive
//! margin means the corresponding vertex absorbs it.

use crate::closed_form::Weights;
use crate::math::vec3;
use crate::sphere::{unit_tangent, GeodesicTriangle, UnitPoint};
use crate::{Error, Result};

/// Margins this close to zero (or below) classify as absorbed, matching
/// the non-strict absorbed inequality.
pub const ABSORBED_MARGIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    /// Interior minimizer; no vertex absorbs.
    Floating,
    /// The minimizer coincides with the given vertex (1-based).
    AbsorbedAt(usize),
}

/// Classification outcome with the per-vertex margins that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseDecision {
    pub label: CaseLabel,
    /// `margins[i] = ||w_j U_ij + w_k U_ik|| - w_i`, one per vertex.
    pub margins: [f64; 3],
}

/// Margin at vertex `i` (0-based).
pub(crate) fn vertex_margin(tri: &GeodesicTriangle, w: &Weights, i: usize) -> f64 {
    let v = tri.vertices();
    let wa = w.as_array();
    let j = (i + 1) % 3;
    let k = (i + 2) % 3;
    let tj = unit_tangent(&v[i], &v[j]).expect("triangle invariant");
    let tk = unit_tangent(&v[i], &v[k]).expect("triangle invariant");
    let combined = vec3::add(
        vec3::scale(tj.direction(), wa[j]),
        vec3::scale(tk.direction(), wa[k]),
    );
    vec3::norm(combined) - wa[i]
}

/// Decide floating vs absorbed for the triangle/weight pair.
///
/// Positive weights should make at most one margin non-positive; if two
/// are, the diagnostic [`Error::AmbiguousAbsorption`] is returned instead
/// of guessing.
pub fn classify(tri: &GeodesicTriangle, w: &Weights) -> Result<CaseDecision> {
    let margins = [
        vertex_margin(tri, w, 0),
        vertex_margin(tri, w, 1),
        vertex_margin(tri, w, 2),
    ];
    let mut absorbed = None;
    for (i, m) in margins.iter().enumerate() {
        if *m < ABSORBED_MARGIN_TOL {
            if absorbed.is_some() {
                return Err(Error::AmbiguousAbsorption);
            }
            absorbed = Some(i + 1);
        }
    }
    Ok(CaseDecision {
        label: match absorbed {
            Some(i) => CaseLabel::AbsorbedAt(i),
            None => CaseLabel::Floating,
        },
        margins,
    })
}

/// Norm of the weighted sum of unit tangents from `p` toward the vertices.
/// Near zero certifies an interior weighted Fermat-Torricelli point.
pub fn stationarity_residual(tri: &GeodesicTriangle, w: &Weights, p: &UnitPoint) -> Result<f64> {
    let v = tri.vertices();
    let wa = w.as_array();
    let mut sum = [0.0; 3];
    for i in 0..3 {
        let t = unit_tangent(p, &v[i])?;
        sum = vec3::add(sum, vec3::scale(t.direction(), wa[i]));
    }
    Ok(vec3::norm(sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights(a: f64, b: f64, c: f64) -> Weights {
        Weights::new(a, b, c).unwrap()
    }

    #[test]
    fn octant_equal_weights_float() {
        let d = classify(&GeodesicTriangle::octant(), &weights(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(d.label, CaseLabel::Floating);
        // orthogonal tangents at each octant vertex: norm sqrt(2)
        let expect = 2.0f64.sqrt() - 1.0;
        for m in d.margins {
            assert!((m - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn pythagorean_boundary_absorbs() {
        let d = classify(&GeodesicTriangle::octant(), &weights(3.0, 4.0, 5.0)).unwrap();
        assert_eq!(d.label, CaseLabel::AbsorbedAt(3));
        assert!(d.margins[2].abs() < 1e-12);
        assert!(d.margins[0] > 0.0 && d.margins[1] > 0.0);
    }

    #[test]
    fn dominant_weight_absorbs() {
        let d = classify(&GeodesicTriangle::octant(), &weights(1.0, 1.0, 10.0)).unwrap();
        assert_eq!(d.label, CaseLabel::AbsorbedAt(3));
    }

    #[test]
    fn residual_vanishes_at_equal_weight_center() {
        let s = 1.0 / 3.0f64.sqrt();
        let p = UnitPoint::new(s, s, s).unwrap();
        let r = stationarity_residual(&GeodesicTriangle::octant(), &weights(1.0, 1.0, 1.0), &p)
            .unwrap();
        assert!(r < 1e-10);
    }

    #[test]
    fn residual_large_away_from_minimizer() {
        let p = UnitPoint::new(0.999, 0.03, 0.03).unwrap();
        let r = stationarity_residual(&GeodesicTriangle::octant(), &weights(1.0, 1.0, 1.0), &p)
            .unwrap();
        assert!(r > 0.1);
    }

    #[test]
    fn residual_rejects_vertex_point() {
        let tri = GeodesicTriangle::octant();
        let p = tri.vertex(1);
        assert_eq!(
            stationarity_residual(&tri, &weights(1.0, 1.0, 1.0), &p),
            Err(Error::DegenerateDirection)
        );
    }
}
