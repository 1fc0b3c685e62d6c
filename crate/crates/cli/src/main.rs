//! Command-line front end: solve, classify, minimize, plasticity-generate,
//! plasticity-invert, and grid subcommands with deterministic JSON/CSV
//! output.

mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "fermat-sphere",
    version,
    about = "Weighted Fermat-Torricelli points of geodesic triangles on the unit sphere"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Exact octant-triangle solution (falls back to the numeric
    /// minimizer for absorbed configurations)
    Solve(CommonArgs),
    /// Floating vs absorbed decision with per-vertex margins
    Classify(CommonArgs),
    /// Numeric global minimizer: Fibonacci-lattice scan plus descent
    Minimize(CommonArgs),
    /// Shrink the triangle toward its minimizer and report predicted and
    /// measured sides
    PlasticityGenerate {
        #[command(flatten)]
        common: CommonArgs,
        /// Arc offsets a,b,c along the vertex-to-minimizer geodesics
        #[arg(long, value_name = "A,B,C")]
        offsets: String,
    },
    /// Recover shrink offsets producing prescribed side lengths
    PlasticityInvert {
        #[command(flatten)]
        common: CommonArgs,
        /// Target sides s12,s23,s13
        #[arg(long, value_name = "S12,S23,S13")]
        targets: String,
        #[arg(long, value_enum, default_value_t = SolverArg::Newton)]
        solver: SolverArg,
    },
    /// Sample the objective on a regular latitude/azimuth grid
    Grid {
        #[command(flatten)]
        common: CommonArgs,
        /// Grid resolution per axis (emits resolution^2 rows)
        #[arg(long, default_value_t = 100)]
        resolution: usize,
    },
}

#[derive(Args)]
pub struct CommonArgs {
    /// Vertex weights w1,w2,w3 (strictly positive)
    #[arg(long, value_name = "W1,W2,W3")]
    pub weights: String,
    /// Triangle vertices x1,y1,z1,x2,y2,z2,x3,y3,z3 (normalized onto the
    /// sphere); defaults to the octant triangle
    #[arg(long, value_name = "COORDS")]
    pub triangle: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Unit for angle-valued inputs and outputs
    #[arg(long, value_enum, default_value_t = AngleUnitArg::Rad)]
    pub angle_unit: AngleUnitArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AngleUnitArg {
    Rad,
    Deg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Newton,
    Weierstrass,
    Both,
}

/// Failures mapped onto the exit-code contract: 2 for validation, 3 when
/// a solver reports no solution.
pub enum CliError {
    Validation(String),
    Solver(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(2),
            CliError::Solver(_) => ExitCode::from(3),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "error: validation: {m}"),
            CliError::Solver(m) => write!(f, "error: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            e.code()
        }
    }
}
