//! Benchmark report rows and their CSV / markdown rendering.

use std::fmt;
use std::path::Path;
use std::time::Duration;

use lldp45::testset::ProblemName;
use lldp45::Method;

use crate::error::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simulation {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Simulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Simulation::A => "A",
            Simulation::B => "B",
            Simulation::C => "C",
            Simulation::D => "D",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Simulation {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Simulation::A),
            "B" => Ok(Simulation::B),
            "C" => Ok(Simulation::C),
            "D" => Ok(Simulation::D),
            other => Err(BenchError::usage(format!("unknown simulation '{other}'"))),
        }
    }
}

/// The three standard tolerance classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TolClass {
    Crude,
    Mild,
    Refined,
}

impl TolClass {
    pub fn tolerance(self) -> ToleranceSet {
        match self {
            TolClass::Crude => ToleranceSet {
                label: self,
                rtol: 1e-3,
                atol: 1e-6,
            },
            TolClass::Mild => ToleranceSet {
                label: self,
                rtol: 1e-6,
                atol: 1e-9,
            },
            TolClass::Refined => ToleranceSet {
                label: self,
                rtol: 1e-9,
                atol: 1e-12,
            },
        }
    }
}

impl fmt::Display for TolClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TolClass::Crude => "crude",
            TolClass::Mild => "mild",
            TolClass::Refined => "refined",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for TolClass {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s.to_ascii_lowercase().as_str() {
            "crude" => Ok(TolClass::Crude),
            "mild" => Ok(TolClass::Mild),
            "refined" => Ok(TolClass::Refined),
            other => Err(BenchError::usage(format!("unknown tolerance '{other}'"))),
        }
    }
}

/// A labelled (rtol, atol) pair.
#[derive(Clone, Copy, Debug)]
pub struct ToleranceSet {
    pub label: TolClass,
    pub rtol: f64,
    pub atol: f64,
}

impl ToleranceSet {
    pub fn crude() -> Self {
        TolClass::Crude.tolerance()
    }

    pub fn mild() -> Self {
        TolClass::Mild.tolerance()
    }

    pub fn refined() -> Self {
        TolClass::Refined.tolerance()
    }

    /// Both tolerances multiplied by a positive factor; the result must
    /// keep rtol inside (0, 1).
    pub fn scaled(&self, factor: f64) -> Result<(f64, f64), BenchError> {
        if !(factor > 0.0) {
            return Err(BenchError::usage("scale factor must be positive"));
        }
        let rtol = self.rtol * factor;
        if !(rtol < 1.0) {
            return Err(BenchError::usage(format!(
                "scaled rtol {rtol:e} leaves (0, 1)"
            )));
        }
        Ok((rtol, self.atol * factor))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    /// A step-computation failure (Padé denominator, overflow,
    /// non-finite field) interrupted the run; partial counts reported.
    StepFailed,
    /// The dual-method reference cross-check failed, so no relative
    /// error is reported for this row.
    ReferenceFailed,
    /// The adaptive loop aborted (step-size underflow or similar).
    IntegrationFailed,
}

impl RunStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RunStatus::Ok)
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RunStatus::Ok => "ok",
            RunStatus::StepFailed => "step_failed",
            RunStatus::ReferenceFailed => "reference_failed",
            RunStatus::IntegrationFailed => "integration_failed",
        };
        f.write_str(s)
    }
}

/// One (simulation, problem, method, tolerance) measurement.
#[derive(Clone, Debug)]
pub struct SimulationReport {
    pub simulation: Simulation,
    pub problem: ProblemName,
    pub method: Method,
    pub tolerance: TolClass,
    /// Tolerance scale factor applied on top of the class (C only).
    pub scale: Option<f64>,
    pub accepted_steps: u64,
    pub failed_steps: u64,
    pub f_evals: u64,
    pub expm_evals: u64,
    /// Number of dense-output evaluation points (D only).
    pub dense_points: Option<u64>,
    pub relative_error: Option<f64>,
    pub wall_time: Duration,
    pub status: RunStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(BenchError::usage(format!("unknown format '{other}'"))),
        }
    }
}

pub const CSV_HEADER: &str = "simulation,problem,method,tolerance,scale,accepted_steps,failed_steps,f_evals,expm_evals,dense_points,relative_error,wall_time_s,status";

fn cells(r: &SimulationReport) -> [String; 13] {
    [
        r.simulation.to_string(),
        r.problem.to_string(),
        r.method.to_string(),
        r.tolerance.to_string(),
        r.scale.map(|s| format!("{s:.6e}")).unwrap_or_default(),
        r.accepted_steps.to_string(),
        r.failed_steps.to_string(),
        r.f_evals.to_string(),
        r.expm_evals.to_string(),
        r.dense_points.map(|d| d.to_string()).unwrap_or_default(),
        r.relative_error
            .map(|e| format!("{e:.6e}"))
            .unwrap_or_default(),
        format!("{:.6e}", r.wall_time.as_secs_f64()),
        r.status.to_string(),
    ]
}

pub fn render_csv(reports: &[SimulationReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&cells(r).join(","));
        out.push('\n');
    }
    out
}

pub fn render_markdown(reports: &[SimulationReport]) -> String {
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    let mut out = format!("| {} |\n", header.join(" | "));
    out.push_str(&format!("|{}\n", " --- |".repeat(header.len())));
    for r in reports {
        out.push_str(&format!("| {} |\n", cells(r).join(" | ")));
    }
    out
}

/// Writes the report table; an unwritable path is a usage error.
pub fn emit_report(
    reports: &[SimulationReport],
    format: ReportFormat,
    out: &Path,
) -> Result<(), BenchError> {
    let body = match format {
        ReportFormat::Csv => render_csv(reports),
        ReportFormat::Markdown => render_markdown(reports),
    };
    std::fs::write(out, body)
        .map_err(|e| BenchError::usage(format!("cannot write {}: {e}", out.display())))
}
