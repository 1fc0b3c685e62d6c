//! Scalar math shims over [`libm`] so the crate stays `no_std`.

pub(crate) use libm::{acos, asin, atan, atan2, cos, fabs, fmod, sin, sqrt, tan};

/// Clamp to `[-1, 1]` before an inverse trig call. Dot products of unit
/// vectors can exceed 1 by a few ulps.
pub(crate) fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

pub(crate) fn acos_clamped(x: f64) -> f64 {
    acos(clamp_unit(x))
}

/// 3-vector helpers on raw `[f64; 3]`.
pub(crate) mod vec3 {
    use super::sqrt;

    pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    pub fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    pub fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    pub fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
        [a[0] * s, a[1] * s, a[2] * s]
    }

    pub fn norm(a: [f64; 3]) -> f64 {
        sqrt(dot(a, a))
    }
}
