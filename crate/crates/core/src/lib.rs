//! Weighted Fermat-Torricelli points of geodesic triangles on the unit
//! sphere.
//!
//! Given three vertices on the sphere and a positive weight per vertex,
//! the weighted Fermat-Torricelli point minimizes the weighted sum of
//! geodesic distances to the vertices. This crate provides:
//!
//! * [`sphere`] — geodesic distances, tangent vectors, points along arcs,
//!   and the spherical cosine/sine laws;
//! * [`closed_form`] — the exact minimizer of the octant triangle (all
//!   sides `pi/2`) as a function of the weights, via two independent
//!   formula routes;
//! * [`classifier`] — the floating (interior minimizer) vs absorbed
//!   (vertex minimizer) decision for arbitrary triangles;
//! * [`oracle`] — a deterministic global minimizer (Fibonacci-lattice scan
//!   plus Riemannian descent) used as ground truth for everything else;
//! * [`plasticity`] — shrinking a triangle along the geodesics through its
//!   minimizer without moving the minimizer, predicting the shrunken
//!   sides, and solving the inverse problem by Newton iteration or a
//!   tangent half-angle (rational) reduction.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes
//! through [`libm`], so results are identical across platforms.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classifier;
pub mod closed_form;
mod error;
mod math;
pub mod oracle;
pub mod plasticity;
pub mod sphere;

pub use classifier::{CaseDecision, CaseLabel};
pub use closed_form::{FermatCase, FermatResult, VertexAngles, Weights};
pub use error::Error;
pub use oracle::{DescentOutcome, GridRow, OracleOptions};
pub use plasticity::{BranchScan, HalfAngleTriple, ShrinkOffsets, TriangleSides};
pub use sphere::{GeodesicTriangle, SphericalCoords, TangentVector, UnitPoint};

pub type Result<T> = core::result::Result<T, Error>;
