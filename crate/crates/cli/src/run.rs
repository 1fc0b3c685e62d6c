//! Command implementations: parse, compute, serialize, emit.

use std::io::Write as _;

use fermat_sphere::classifier::{classify, CaseDecision, CaseLabel};
use fermat_sphere::closed_form::solve_octant;
use fermat_sphere::oracle::{grid_scan, minimize, OracleOptions};
use fermat_sphere::plasticity::{
    invert_sides_newton, invert_sides_weierstrass, predicted_sides, shrink_triangle_about,
    ShrinkOffsets, TriangleSides,
};
use fermat_sphere::sphere::geodesic_distance;
use fermat_sphere::{Error, FermatResult, GeodesicTriangle, UnitPoint, Weights};

use crate::report::{self, Report, SolutionBlock};
use crate::{AngleUnitArg, Cli, CliError, Cmd, CommonArgs, FormatArg, SolverArg};

fn map_core(e: Error) -> CliError {
    match e {
        Error::NoConvergence { .. } => CliError::Solver(format!("no-convergence: {e}")),
        Error::NoRealSolution { .. } => CliError::Solver(format!("no-real-solution: {e}")),
        Error::InfeasibleTarget => CliError::Solver(format!("infeasible-target: {e}")),
        other => CliError::Validation(other.to_string()),
    }
}

fn parse_floats(s: &str, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(CliError::Validation(format!(
            "{what} needs {n} comma-separated numbers, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Validation(format!("{what}: cannot parse `{p}`")))
        })
        .collect()
}

struct Inputs {
    weights: Weights,
    weights_echo: [f64; 3],
    triangle: GeodesicTriangle,
    triangle_echo: [[f64; 3]; 3],
    /// The default octant triangle was used, enabling the closed form.
    octant: bool,
    deg: bool,
}

impl Inputs {
    fn parse(common: &CommonArgs) -> Result<Self, CliError> {
        let w = parse_floats(&common.weights, 3, "--weights")?;
        let weights = Weights::new(w[0], w[1], w[2]).map_err(map_core)?;
        let (triangle, octant) = match &common.triangle {
            None => (GeodesicTriangle::octant(), true),
            Some(s) => {
                let c = parse_floats(s, 9, "--triangle")?;
                let v = |i: usize| UnitPoint::new(c[3 * i], c[3 * i + 1], c[3 * i + 2]);
                let tri = GeodesicTriangle::new(
                    v(0).map_err(map_core)?,
                    v(1).map_err(map_core)?,
                    v(2).map_err(map_core)?,
                )
                .map_err(map_core)?;
                (tri, false)
            }
        };
        let verts = triangle.vertices();
        Ok(Self {
            weights,
            weights_echo: [w[0], w[1], w[2]],
            triangle,
            triangle_echo: [
                verts[0].as_array(),
                verts[1].as_array(),
                verts[2].as_array(),
            ],
            octant,
            deg: common.angle_unit == AngleUnitArg::Deg,
        })
    }

    /// Convert an angle-valued input to radians.
    fn in_angle(&self, x: f64) -> f64 {
        if self.deg {
            x.to_radians()
        } else {
            x
        }
    }

    /// Convert an angle-valued output from radians.
    fn out_angle(&self, x: f64) -> f64 {
        if self.deg {
            x.to_degrees()
        } else {
            x
        }
    }

    fn unit_name(&self) -> &'static str {
        if self.deg {
            "deg"
        } else {
            "rad"
        }
    }

    fn echo(&self, command: &'static str, format: &'static str) -> report::InputEcho {
        report::InputEcho {
            command,
            weights: self.weights_echo,
            triangle: self.triangle_echo,
            offsets: None,
            targets: None,
            resolution: None,
            solver: None,
            angle_unit: self.unit_name(),
            format,
        }
    }

    fn classify(&self) -> Result<CaseDecision, CliError> {
        classify(&self.triangle, &self.weights).map_err(map_core)
    }

    /// Locate the minimizer: the closed form on a floating octant
    /// configuration, the numeric oracle everywhere else.
    fn solve(&self, decision: &CaseDecision) -> Result<FermatResult, CliError> {
        if self.octant && decision.label == CaseLabel::Floating {
            solve_octant(&self.weights).map_err(map_core)
        } else {
            minimize(&self.triangle, &self.weights, &OracleOptions::default()).map_err(map_core)
        }
    }

    fn require_floating(&self, decision: &CaseDecision) -> Result<(), CliError> {
        if let CaseLabel::AbsorbedAt(i) = decision.label {
            return Err(CliError::Validation(format!(
                "absorbed regime: minimizer attained at vertex {i}; this command requires a floating configuration"
            )));
        }
        Ok(())
    }
}

fn require_json(common: &CommonArgs) -> Result<(), CliError> {
    if common.format == FormatArg::Csv {
        return Err(CliError::Validation(
            "csv output is only available for the grid command".into(),
        ));
    }
    Ok(())
}

fn emit(common: &CommonArgs, bytes: &[u8]) -> Result<(), CliError> {
    match &common.out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Validation(format!("cannot write to stdout: {e}")))
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Solve(common) => solve_cmd(&common, "solve"),
        Cmd::Classify(common) => classify_cmd(&common),
        Cmd::Minimize(common) => solve_cmd(&common, "minimize"),
        Cmd::PlasticityGenerate { common, offsets } => generate_cmd(&common, &offsets),
        Cmd::PlasticityInvert {
            common,
            targets,
            solver,
        } => invert_cmd(&common, &targets, solver),
        Cmd::Grid { common, resolution } => grid_cmd(&common, resolution),
    }
}

fn solve_cmd(common: &CommonArgs, command: &'static str) -> Result<(), CliError> {
    require_json(common)?;
    let inputs = Inputs::parse(common)?;
    let decision = inputs.classify()?;
    let result = if command == "minimize" {
        minimize(&inputs.triangle, &inputs.weights, &OracleOptions::default()).map_err(map_core)?
    } else {
        inputs.solve(&decision)?
    };
    let report = Report {
        input: inputs.echo(command, "json"),
        result: SolutionBlock::new(&result, |x| inputs.out_angle(x)),
        diagnostics: report::SolveDiagnostics {
            stationarity_residual: result.stationarity_residual,
            margins: decision.margins,
        },
        version: report::VERSION,
    };
    emit(common, &report::to_json_bytes(&report))
}

fn classify_cmd(common: &CommonArgs) -> Result<(), CliError> {
    require_json(common)?;
    let inputs = Inputs::parse(common)?;
    let decision = inputs.classify()?;
    let located = inputs.solve(&decision)?;
    let (label, vertex) = match decision.label {
        CaseLabel::Floating => ("floating", None),
        CaseLabel::AbsorbedAt(i) => ("absorbed", Some(i as u64)),
    };
    let report = Report {
        input: inputs.echo("classify", "json"),
        result: report::ClassifyResult {
            label,
            vertex,
            margins: decision.margins,
            point: located.point.as_array(),
            omega: inputs.out_angle(located.coords.omega),
            phi: inputs.out_angle(located.coords.phi),
            objective: located.objective,
            distances: located.distances.map(|d| inputs.out_angle(d)),
        },
        diagnostics: report::ClassifyDiagnostics {
            stationarity_residual: located.stationarity_residual,
        },
        version: report::VERSION,
    };
    emit(common, &report::to_json_bytes(&report))
}

fn generate_cmd(common: &CommonArgs, offsets: &str) -> Result<(), CliError> {
    require_json(common)?;
    let inputs = Inputs::parse(common)?;
    let raw = parse_floats(offsets, 3, "--offsets")?;
    let decision = inputs.classify()?;
    inputs.require_floating(&decision)?;
    let base = inputs.solve(&decision)?;

    let off = ShrinkOffsets::new(
        inputs.in_angle(raw[0]),
        inputs.in_angle(raw[1]),
        inputs.in_angle(raw[2]),
    )
    .map_err(map_core)?;
    let shrunk = shrink_triangle_about(&inputs.triangle, &base.point, &off).map_err(map_core)?;
    let predicted = predicted_sides(base.distances, &off, &inputs.weights).map_err(map_core)?;
    let measured = shrunk.sides();
    let equation_residuals = [
        predicted.s12().cos() - measured[0].cos(),
        predicted.s23().cos() - measured[1].cos(),
        predicted.s13().cos() - measured[2].cos(),
    ];
    let drifted =
        minimize(&shrunk, &inputs.weights, &OracleOptions::default()).map_err(map_core)?;
    let shrunk_verts = shrunk.vertices();

    let report = Report {
        input: report::InputEcho {
            offsets: Some([raw[0], raw[1], raw[2]]),
            ..inputs.echo("plasticity-generate", "json")
        },
        result: report::GenerateResult {
            base: SolutionBlock::new(&base, |x| inputs.out_angle(x)),
            offsets: off.as_array().map(|x| inputs.out_angle(x)),
            predicted_sides: predicted.as_array().map(|x| inputs.out_angle(x)),
            measured_sides: measured.map(|x| inputs.out_angle(x)),
            shrunken_triangle: [
                shrunk_verts[0].as_array(),
                shrunk_verts[1].as_array(),
                shrunk_verts[2].as_array(),
            ],
        },
        diagnostics: report::GenerateDiagnostics {
            stationarity_residual: base.stationarity_residual,
            equation_residuals,
            minimizer_drift: geodesic_distance(&drifted.point, &base.point),
        },
        version: report::VERSION,
    };
    emit(common, &report::to_json_bytes(&report))
}

fn invert_cmd(common: &CommonArgs, targets: &str, solver: SolverArg) -> Result<(), CliError> {
    require_json(common)?;
    let inputs = Inputs::parse(common)?;
    let raw = parse_floats(targets, 3, "--targets")?;
    let decision = inputs.classify()?;
    inputs.require_floating(&decision)?;
    let base = inputs.solve(&decision)?;

    let target = TriangleSides::new(
        inputs.in_angle(raw[0]),
        inputs.in_angle(raw[1]),
        inputs.in_angle(raw[2]),
    )
    .map_err(map_core)?;
    let a0 = base.distances;

    let (solver_name, run_newton, run_weierstrass) = match solver {
        SolverArg::Newton => ("newton", true, false),
        SolverArg::Weierstrass => ("weierstrass", false, true),
        SolverArg::Both => ("both", true, true),
    };

    let mut newton_offsets = None;
    let mut newton_equation_residuals = None;
    if run_newton {
        let off = invert_sides_newton(&target, &inputs.weights, a0).map_err(map_core)?;
        let res =
            fermat_sphere::plasticity::side_equation_residuals(a0, &off, &inputs.weights, &target)
                .map_err(map_core)?;
        newton_offsets = Some(off.as_array().map(|x| inputs.out_angle(x)));
        newton_equation_residuals = Some(res);
    }

    let mut solutions = None;
    let mut solution_equation_residuals = None;
    if run_weierstrass {
        let sols = invert_sides_weierstrass(&target, &inputs.weights, a0).map_err(map_core)?;
        let mut residuals = Vec::with_capacity(sols.len());
        for s in &sols {
            residuals.push(
                fermat_sphere::plasticity::side_equation_residuals(a0, s, &inputs.weights, &target)
                    .map_err(map_core)?,
            );
        }
        solutions = Some(
            sols.iter()
                .map(|s| s.as_array().map(|x| inputs.out_angle(x)))
                .collect(),
        );
        solution_equation_residuals = Some(residuals);
    }

    let report = Report {
        input: report::InputEcho {
            targets: Some([raw[0], raw[1], raw[2]]),
            solver: Some(solver_name),
            ..inputs.echo("plasticity-invert", "json")
        },
        result: report::InvertResult {
            base: SolutionBlock::new(&base, |x| inputs.out_angle(x)),
            newton_offsets,
            solutions,
        },
        diagnostics: report::InvertDiagnostics {
            stationarity_residual: base.stationarity_residual,
            newton_equation_residuals,
            solution_equation_residuals,
        },
        version: report::VERSION,
    };
    emit(common, &report::to_json_bytes(&report))
}

fn grid_cmd(common: &CommonArgs, resolution: usize) -> Result<(), CliError> {
    if !(2..=4096).contains(&resolution) {
        return Err(CliError::Validation(format!(
            "--resolution must be between 2 and 4096, got {resolution}"
        )));
    }
    let inputs = Inputs::parse(common)?;
    let rows = grid_scan(&inputs.triangle, &inputs.weights, resolution);

    if common.format == FormatArg::Csv {
        return emit(common, &report::grid_csv(&rows, |x| inputs.out_angle(x)));
    }

    let decision = inputs.classify()?;
    let base = inputs.solve(&decision)?;
    let report = Report {
        input: report::InputEcho {
            resolution: Some(resolution as u64),
            ..inputs.echo("grid", "json")
        },
        result: report::GridResult {
            base: SolutionBlock::new(&base, |x| inputs.out_angle(x)),
            rows: rows
                .iter()
                .map(|r| {
                    [
                        inputs.out_angle(r.omega),
                        inputs.out_angle(r.phi),
                        r.objective,
                    ]
                })
                .collect(),
        },
        diagnostics: report::GridDiagnostics {
            stationarity_residual: base.stationarity_residual,
            rows_emitted: rows.len() as u64,
        },
        version: report::VERSION,
    };
    emit(common, &report::to_json_bytes(&report))
}
