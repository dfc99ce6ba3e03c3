//! Work counters for an integration run.

use std::time::Duration;

/// Evaluation and step counters.
///
/// `f_evals` counts field evaluations made by the step formulas and the
/// initial-step estimate; field calls made internally by a
/// finite-difference Jacobian are attributed to `jacobian_evals`. For the
/// locally linearized method every attempted step costs six field
/// evaluations, one Jacobian and one exponential chain, so on a completed
/// run `f_evals = 6 * (accepted + failed) + 1` and
/// `jacobian_evals = expm_evals = accepted + failed`. The classical
/// method satisfies the same field count with both matrix counters zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub accepted_steps: u64,
    pub failed_steps: u64,
    pub f_evals: u64,
    pub jacobian_evals: u64,
    pub expm_evals: u64,
    pub wall_time: Duration,
}

impl SolverStats {
    pub fn attempted_steps(&self) -> u64 {
        self.accepted_steps + self.failed_steps
    }
}
