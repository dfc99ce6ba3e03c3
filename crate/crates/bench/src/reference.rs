//! Reference solutions: closed forms for the two linear problems,
//! otherwise a tight locally linearized run at Padé (6,6), gated by a
//! dual-method cross-check before any relative error is reported.

use lldp45::testset::{make_problem, ProblemName, ReferenceFn};
use lldp45::{integrate, AdaptiveConfig, Method, PadeOrder, SolutionPath};

use crate::error::BenchError;
use crate::metrics::relative_error;

pub const REFERENCE_RTOL: f64 = 1e-12;
pub const REFERENCE_ATOL: f64 = 1e-14;
/// Maximum allowed relative disagreement between the two tight runs.
pub const REFERENCE_CROSS_CHECK: f64 = 1e-7;

pub struct ReferenceSolver {
    name: ProblemName,
    analytic: Option<ReferenceFn>,
    primary: Option<SolutionPath>,
    cross: Option<SolutionPath>,
}

impl ReferenceSolver {
    /// Builds the reference machinery: nothing for analytic problems,
    /// two tight adaptive runs otherwise.
    pub fn new(name: ProblemName) -> Result<Self, BenchError> {
        let named = make_problem(name);
        if let Some(analytic) = named.reference {
            return Ok(ReferenceSolver {
                name,
                analytic: Some(analytic),
                primary: None,
                cross: None,
            });
        }
        let p = named.problem;
        let lldp_cfg =
            AdaptiveConfig::for_problem(&p, Method::Lldp45, REFERENCE_RTOL, REFERENCE_ATOL)?
                .with_pade(PadeOrder::new(6, 6)?);
        let primary = integrate(&p, &lldp_cfg)?;
        let q = make_problem(name).problem;
        let dp_cfg = AdaptiveConfig::for_problem(&q, Method::Dp45, REFERENCE_RTOL, REFERENCE_ATOL)?;
        let cross = integrate(&q, &dp_cfg)?;
        Ok(ReferenceSolver {
            name,
            analytic: None,
            primary: Some(primary),
            cross: Some(cross),
        })
    }

    pub fn is_analytic(&self) -> bool {
        self.analytic.is_some()
    }

    /// Reference states at the requested times. For numeric references
    /// the dual-method cross-check runs on exactly these times and a
    /// disagreement beyond the gate refuses to produce values.
    pub fn sample(&self, times: &[f64]) -> Result<Vec<Vec<f64>>, BenchError> {
        if times.is_empty() {
            return Err(BenchError::usage("no sample times supplied"));
        }
        if let Some(analytic) = &self.analytic {
            return Ok(times.iter().map(|t| analytic(*t)).collect());
        }
        let primary = self.primary.as_ref().expect("numeric reference");
        let cross = self.cross.as_ref().expect("numeric reference");
        let mut primary_states = Vec::with_capacity(times.len());
        let mut cross_states = Vec::with_capacity(times.len());
        for t in times {
            primary_states.push(primary.sample(*t)?);
            cross_states.push(cross.sample(*t)?);
        }
        let disagreement = relative_error(&primary_states, &cross_states)?;
        if disagreement > REFERENCE_CROSS_CHECK {
            return Err(BenchError::ReferenceMismatch {
                problem: self.name,
                disagreement,
            });
        }
        Ok(primary_states)
    }
}

/// One-shot convenience wrapper around [`ReferenceSolver`].
pub fn reference_solution(name: ProblemName, times: &[f64]) -> Result<Vec<Vec<f64>>, BenchError> {
    ReferenceSolver::new(name)?.sample(times)
}
