//! The four simulation studies: same-partition accuracy, same-tolerance
//! performance, matched-accuracy performance, and dense-output accuracy.

use std::time::{Duration, Instant};

use lldp45::testset::{make_problem, ProblemName};
use lldp45::{
    integrate, propagate_on_mesh, AdaptiveConfig, AdvanceOrder, Method, PadeOrder, SolutionPath,
    SolverStats,
};

use crate::error::BenchError;
use crate::metrics::relative_error;
use crate::reference::ReferenceSolver;
use crate::report::{RunStatus, Simulation, SimulationReport, TolClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodSel {
    Both,
    Only(Method),
}

impl MethodSel {
    pub fn includes(&self, m: Method) -> bool {
        match self {
            MethodSel::Both => true,
            MethodSel::Only(only) => *only == m,
        }
    }
}

impl std::str::FromStr for MethodSel {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s.to_ascii_lowercase().as_str() {
            "both" => Ok(MethodSel::Both),
            other => Ok(MethodSel::Only(other.parse::<Method>()?)),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SimOptions {
    pub pade: PadeOrder,
    pub h_max: Option<f64>,
    /// Dense-output subdivisions per interval (simulation D).
    pub refine: u32,
    /// Tolerance scale factor for the locally linearized run
    /// (simulation C).
    pub scale: f64,
    pub methods: MethodSel,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            pade: PadeOrder::default(),
            h_max: None,
            refine: 4,
            scale: 1.0,
            methods: MethodSel::Both,
        }
    }
}

pub fn run_simulation(
    sim: Simulation,
    problem: ProblemName,
    tol: TolClass,
    opts: &SimOptions,
) -> Result<Vec<SimulationReport>, BenchError> {
    match sim {
        Simulation::A => simulation_a(problem, tol, opts),
        Simulation::B => simulation_b(problem, tol, opts),
        Simulation::C => simulation_c(problem, tol, opts),
        Simulation::D => simulation_d(problem, tol, opts),
    }
}

fn make_config(
    name: ProblemName,
    method: Method,
    rtol: f64,
    atol: f64,
    opts: &SimOptions,
) -> Result<(lldp45::OdeProblem, AdaptiveConfig), BenchError> {
    let p = make_problem(name).problem;
    let mut cfg = AdaptiveConfig::for_problem(&p, method, rtol, atol)?.with_pade(opts.pade);
    if let Some(h_max) = opts.h_max {
        cfg = cfg.with_h_max(h_max)?;
    }
    Ok((p, cfg))
}

fn empty_row(
    sim: Simulation,
    problem: ProblemName,
    method: Method,
    tol: TolClass,
    status: RunStatus,
) -> SimulationReport {
    SimulationReport {
        simulation: sim,
        problem,
        method,
        tolerance: tol,
        scale: None,
        accepted_steps: 0,
        failed_steps: 0,
        f_evals: 0,
        expm_evals: 0,
        dense_points: None,
        relative_error: None,
        wall_time: Duration::ZERO,
        status,
    }
}

fn row_from_stats(
    sim: Simulation,
    problem: ProblemName,
    method: Method,
    tol: TolClass,
    stats: &SolverStats,
    re: Option<f64>,
    status: RunStatus,
) -> SimulationReport {
    SimulationReport {
        simulation: sim,
        problem,
        method,
        tolerance: tol,
        scale: None,
        accepted_steps: stats.accepted_steps,
        failed_steps: stats.failed_steps,
        f_evals: stats.f_evals,
        expm_evals: stats.expm_evals,
        dense_points: None,
        relative_error: re,
        wall_time: stats.wall_time,
        status,
    }
}

/// Relative error of an adaptive run over its own mesh; a reference
/// cross-check failure flags the row instead of aborting.
fn re_against_reference(
    reference: &ReferenceSolver,
    path: &SolutionPath,
) -> Result<(Option<f64>, RunStatus), BenchError> {
    match reference.sample(&path.mesh) {
        Ok(ref_states) => {
            let re = relative_error(&ref_states, &path.states)?;
            Ok((Some(re), RunStatus::Ok))
        }
        Err(BenchError::ReferenceMismatch { .. }) => Ok((None, RunStatus::ReferenceFailed)),
        Err(e) => Err(e),
    }
}

/// Same-partition accuracy: the classical pair fixes the mesh at the
/// given tolerance, then the locally linearized order-5 formula walks
/// the identical mesh with no error control. A step-computation failure
/// along the walk is reported as a flagged row.
pub fn simulation_a(
    problem: ProblemName,
    tol: TolClass,
    opts: &SimOptions,
) -> Result<Vec<SimulationReport>, BenchError> {
    let sim = Simulation::A;
    let ts = tol.tolerance();
    let (p, cfg) = make_config(problem, Method::Dp45, ts.rtol, ts.atol, opts)?;
    let dp_path = match integrate(&p, &cfg) {
        Ok(path) => path,
        Err(e) if e.is_step_failure() => {
            return Ok(vec![empty_row(
                sim,
                problem,
                Method::Dp45,
                tol,
                RunStatus::IntegrationFailed,
            )]);
        }
        Err(lldp45::Error::StepSizeUnderflow { .. }) | Err(lldp45::Error::TooManySteps { .. }) => {
            return Ok(vec![empty_row(
                sim,
                problem,
                Method::Dp45,
                tol,
                RunStatus::IntegrationFailed,
            )]);
        }
        Err(e) => return Err(e.into()),
    };
    let reference = ReferenceSolver::new(problem)?;
    let mut rows = Vec::new();

    if opts.methods.includes(Method::Dp45) {
        let (re, status) = re_against_reference(&reference, &dp_path)?;
        rows.push(row_from_stats(
            sim,
            problem,
            Method::Dp45,
            tol,
            &dp_path.stats,
            re,
            status,
        ));
    }

    if opts.methods.includes(Method::Lldp45) {
        let q = make_problem(problem).problem;
        let started = Instant::now();
        let run = propagate_on_mesh(
            &q,
            &dp_path.mesh,
            Method::Lldp45,
            opts.pade,
            AdvanceOrder::Five,
        )?;
        let wall = started.elapsed();
        let mut row = match &run.failure {
            None => {
                let (re, status) = match reference.sample(&dp_path.mesh) {
                    Ok(ref_states) => {
                        let re = relative_error(&ref_states, &run.states)?;
                        (Some(re), RunStatus::Ok)
                    }
                    Err(BenchError::ReferenceMismatch { .. }) => (None, RunStatus::ReferenceFailed),
                    Err(e) => return Err(e),
                };
                row_from_stats(sim, problem, Method::Lldp45, tol, &run.stats, re, status)
            }
            Some((_idx, _cause)) => row_from_stats(
                sim,
                problem,
                Method::Lldp45,
                tol,
                &run.stats,
                None,
                RunStatus::StepFailed,
            ),
        };
        row.wall_time = wall;
        rows.push(row);
    }
    Ok(rows)
}

fn adaptive_rows(
    sim: Simulation,
    problem: ProblemName,
    tol: TolClass,
    opts: &SimOptions,
    tolerances: impl Fn(Method) -> Result<(f64, f64), BenchError>,
) -> Result<Vec<SimulationReport>, BenchError> {
    let reference = ReferenceSolver::new(problem)?;
    let mut rows = Vec::new();
    for method in [Method::Dp45, Method::Lldp45] {
        if !opts.methods.includes(method) {
            continue;
        }
        let (rtol, atol) = tolerances(method)?;
        let (p, cfg) = make_config(problem, method, rtol, atol, opts)?;
        match integrate(&p, &cfg) {
            Ok(path) => {
                let (re, status) = re_against_reference(&reference, &path)?;
                rows.push(row_from_stats(
                    sim,
                    problem,
                    method,
                    tol,
                    &path.stats,
                    re,
                    status,
                ));
            }
            Err(e)
                if e.is_step_failure()
                    || matches!(
                        e,
                        lldp45::Error::StepSizeUnderflow { .. }
                            | lldp45::Error::TooManySteps { .. }
                    ) =>
            {
                rows.push(empty_row(
                    sim,
                    problem,
                    method,
                    tol,
                    RunStatus::IntegrationFailed,
                ));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(rows)
}

/// Same-tolerance performance: both methods run adaptively on their own
/// meshes.
pub fn simulation_b(
    problem: ProblemName,
    tol: TolClass,
    opts: &SimOptions,
) -> Result<Vec<SimulationReport>, BenchError> {
    let ts = tol.tolerance();
    adaptive_rows(Simulation::B, problem, tol, opts, |_| {
        Ok((ts.rtol, ts.atol))
    })
}

/// Matched-accuracy performance: the classical pair runs at the base
/// tolerance, the locally linearized pair at `scale` times it.
pub fn simulation_c(
    problem: ProblemName,
    tol: TolClass,
    opts: &SimOptions,
) -> Result<Vec<SimulationReport>, BenchError> {
    let ts = tol.tolerance();
    let scaled = ts.scaled(opts.scale)?;
    let mut rows = adaptive_rows(Simulation::C, problem, tol, opts, |method| {
        Ok(match method {
            Method::Dp45 => (ts.rtol, ts.atol),
            Method::Lldp45 => scaled,
        })
    })?;
    for row in rows.iter_mut() {
        if row.method == Method::Lldp45 {
            row.scale = Some(opts.scale);
        }
    }
    Ok(rows)
}

/// Dense-output accuracy: adaptive runs whose relative error is taken
/// over the union of mesh points and `refine - 1` interior points per
/// interval, giving `refine * steps + 1` samples.
pub fn simulation_d(
    problem: ProblemName,
    tol: TolClass,
    opts: &SimOptions,
) -> Result<Vec<SimulationReport>, BenchError> {
    if opts.refine == 0 {
        return Err(BenchError::usage("refine must be at least 1"));
    }
    let sim = Simulation::D;
    let ts = tol.tolerance();
    let reference = ReferenceSolver::new(problem)?;
    let mut rows = Vec::new();
    for method in [Method::Dp45, Method::Lldp45] {
        if !opts.methods.includes(method) {
            continue;
        }
        let (p, cfg) = make_config(problem, method, ts.rtol, ts.atol, opts)?;
        match integrate(&p, &cfg) {
            Ok(path) => {
                let started = Instant::now();
                let (times, states) = dense_samples(&path, opts.refine)?;
                let dense_wall = started.elapsed();
                let (re, status) = match reference.sample(&times) {
                    Ok(ref_states) => {
                        let re = relative_error(&ref_states, &states)?;
                        (Some(re), RunStatus::Ok)
                    }
                    Err(BenchError::ReferenceMismatch { .. }) => (None, RunStatus::ReferenceFailed),
                    Err(e) => return Err(e),
                };
                let mut row = row_from_stats(sim, problem, method, tol, &path.stats, re, status);
                row.dense_points = Some(times.len() as u64);
                row.wall_time = path.stats.wall_time + dense_wall;
                rows.push(row);
            }
            Err(e)
                if e.is_step_failure()
                    || matches!(
                        e,
                        lldp45::Error::StepSizeUnderflow { .. }
                            | lldp45::Error::TooManySteps { .. }
                    ) =>
            {
                rows.push(empty_row(
                    sim,
                    problem,
                    method,
                    tol,
                    RunStatus::IntegrationFailed,
                ));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(rows)
}

/// Mesh points plus `refine - 1` interior dense evaluations per
/// interval, in time order.
fn dense_samples(
    path: &SolutionPath,
    refine: u32,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), BenchError> {
    let mut times = Vec::new();
    let mut states = Vec::new();
    for (i, di) in path.interpolants.iter().enumerate() {
        times.push(path.mesh[i]);
        states.push(path.states[i].clone());
        for k in 1..refine {
            let theta = k as f64 / refine as f64;
            times.push(di.t_start + theta * di.h);
            states.push(di.eval(theta)?);
        }
    }
    times.push(*path.mesh.last().unwrap());
    states.push(path.states.last().unwrap().clone());
    Ok((times, states))
}
