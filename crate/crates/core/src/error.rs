use alloc::boxed::Box;
use core::fmt;

use crate::plasticity::BranchScan;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A geodesic direction is undefined: the endpoints are coincident or
    /// antipodal within tolerance.
    DegenerateDirection,
    /// An arc-length parameter left its allowed interval.
    OutOfRange { value: f64, max: f64 },
    /// Triangle vertices are pairwise coincident/antipodal or the sides
    /// leave `(0, pi)`.
    DegenerateTriangle,
    /// Weights must be finite and strictly positive.
    InvalidWeights,
    /// Point coordinates must be finite and not all zero.
    InvalidCoordinates,
    /// Offsets must be finite and non-negative.
    InvalidOffsets,
    /// The configuration is in the absorbed regime: the minimizer sits at
    /// the given vertex (1-based), so the requested floating-case operation
    /// does not apply.
    NotFloating { vertex: usize },
    /// More than one vertex satisfies the absorbed inequality. Positive
    /// weights should make absorption unique; this is surfaced as a
    /// diagnostic instead of silently picking a vertex.
    AmbiguousAbsorption,
    /// A radicand or inverse-trigonometric argument left its domain by more
    /// than rounding noise.
    NumericalDomain,
    /// An iteration exhausted its budget. Carries the best iterate found
    /// (point coordinates or offset triple, per the failing solver) and its
    /// residual.
    NoConvergence { best: [f64; 3], residual: f64 },
    /// A shrink offset reaches or exceeds the corresponding vertex-to-
    /// minimizer arc (1-based index).
    OffsetTooLarge { index: usize },
    /// A root finder converged but the offsets violate their feasibility
    /// bounds; the target sides cannot be produced by an admissible shrink.
    InfeasibleTarget,
    /// The rational-reduction scan found no feasible root in any branch.
    /// Carries per-branch scan diagnostics.
    NoRealSolution { scans: Box<[BranchScan; 4]> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateDirection => {
                write!(
                    f,
                    "geodesic direction undefined: endpoints coincident or antipodal"
                )
            }
            Error::OutOfRange { value, max } => {
                write!(f, "arc parameter {value} outside [0, {max}]")
            }
            Error::DegenerateTriangle => write!(f, "degenerate geodesic triangle"),
            Error::InvalidWeights => write!(f, "weights must be finite and strictly positive"),
            Error::InvalidCoordinates => {
                write!(f, "coordinates must be finite and not all zero")
            }
            Error::InvalidOffsets => write!(f, "offsets must be finite and non-negative"),
            Error::NotFloating { vertex } => {
                write!(f, "absorbed regime: minimizer attained at vertex {vertex}")
            }
            Error::AmbiguousAbsorption => {
                write!(f, "more than one vertex satisfies the absorbed inequality")
            }
            Error::NumericalDomain => write!(f, "argument outside numerical domain"),
            Error::NoConvergence { best, residual } => write!(
                f,
                "no convergence: best iterate ({}, {}, {}) with residual {residual:e}",
                best[0], best[1], best[2]
            ),
            Error::OffsetTooLarge { index } => {
                write!(f, "offset {index} reaches the vertex-to-minimizer distance")
            }
            Error::InfeasibleTarget => {
                write!(f, "target sides admit no feasible shrink offsets")
            }
            Error::NoRealSolution { scans } => {
                write!(f, "no real solution in any branch (")?;
                for (i, s) in scans.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    let tag = |upper: bool| if upper { "hi" } else { "lo" };
                    write!(
                        f,
                        "branch {}/{}: {} valid samples, {} sign changes, {} rejected",
                        tag(s.first_root_upper),
                        tag(s.third_root_upper),
                        s.valid_samples,
                        s.sign_changes,
                        s.rejected_roots
                    )?;
                }
                write!(f, ")")
            }
        }
    }
}

impl core::error::Error for Error {}
