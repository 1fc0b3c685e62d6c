//! Report structures and deterministic serialization.
//!
//! Every float is emitted with 17 significant digits (`{:.16e}`), enough
//! to round-trip any 64-bit value, so identical inputs produce
//! byte-identical output.

use std::io;

use fermat_sphere::{FermatCase, FermatResult, GridRow};
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// JSON formatter printing every f64 in 17-significant-digit scientific
/// notation.
struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value
        .serialize(&mut ser)
        .expect("report serialization is infallible");
    out.push(b'\n');
    out
}

#[derive(Serialize)]
pub struct Report<R: Serialize, D: Serialize> {
    pub input: InputEcho,
    pub result: R,
    pub diagnostics: D,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct InputEcho {
    pub command: &'static str,
    pub weights: [f64; 3],
    /// Normalized vertices actually used.
    pub triangle: [[f64; 3]; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offsets: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub targets: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<&'static str>,
    pub angle_unit: &'static str,
    pub format: &'static str,
}

/// The solved point and its bookkeeping, shared by every solving command.
#[derive(Serialize)]
pub struct SolutionBlock {
    pub case: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<u64>,
    pub point: [f64; 3],
    pub omega: f64,
    pub phi: f64,
    pub objective: f64,
    pub distances: [f64; 3],
}

impl SolutionBlock {
    pub fn new(r: &FermatResult, to_unit: impl Fn(f64) -> f64) -> Self {
        let (case, vertex) = match r.case {
            FermatCase::Interior => ("interior", None),
            FermatCase::AbsorbedAt(i) => ("absorbed", Some(i as u64)),
        };
        Self {
            case,
            vertex,
            point: r.point.as_array(),
            omega: to_unit(r.coords.omega),
            phi: to_unit(r.coords.phi),
            objective: r.objective,
            distances: r.distances.map(&to_unit),
        }
    }
}

#[derive(Serialize)]
pub struct SolveDiagnostics {
    pub stationarity_residual: f64,
    pub margins: [f64; 3],
}

#[derive(Serialize)]
pub struct ClassifyResult {
    pub label: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<u64>,
    pub margins: [f64; 3],
    pub point: [f64; 3],
    pub omega: f64,
    pub phi: f64,
    pub objective: f64,
    pub distances: [f64; 3],
}

#[derive(Serialize)]
pub struct ClassifyDiagnostics {
    pub stationarity_residual: f64,
}

#[derive(Serialize)]
pub struct GenerateResult {
    pub base: SolutionBlock,
    pub offsets: [f64; 3],
    pub predicted_sides: [f64; 3],
    pub measured_sides: [f64; 3],
    pub shrunken_triangle: [[f64; 3]; 3],
}

#[derive(Serialize)]
pub struct GenerateDiagnostics {
    pub stationarity_residual: f64,
    /// Cosine-space gap between predicted and measured sides.
    pub equation_residuals: [f64; 3],
    /// Arc between the base minimizer and the shrunken triangle's
    /// numeric minimizer.
    pub minimizer_drift: f64,
}

#[derive(Serialize)]
pub struct InvertResult {
    pub base: SolutionBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_offsets: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<[f64; 3]>>,
}

#[derive(Serialize)]
pub struct InvertDiagnostics {
    pub stationarity_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_equation_residuals: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution_equation_residuals: Option<Vec<[f64; 3]>>,
}

#[derive(Serialize)]
pub struct GridResult {
    pub base: SolutionBlock,
    /// `[omega, phi, objective]` rows in row-major omega-then-phi order.
    pub rows: Vec<[f64; 3]>,
}

#[derive(Serialize)]
pub struct GridDiagnostics {
    pub stationarity_residual: f64,
    pub rows_emitted: u64,
}

/// CSV payload for the grid command: fixed header, LF line endings, the
/// same 17-significant-digit float format as JSON.
pub fn grid_csv(rows: &[GridRow], to_unit: impl Fn(f64) -> f64) -> Vec<u8> {
    use std::fmt::Write as _;
    let mut s = String::with_capacity(rows.len() * 72 + 24);
    s.push_str("omega,phi,objective\n");
    for r in rows {
        writeln!(
            s,
            "{:.16e},{:.16e},{:.16e}",
            to_unit(r.omega),
            to_unit(r.phi),
            r.objective
        )
        .expect("string write");
    }
    s.into_bytes()
}
