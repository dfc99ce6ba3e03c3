use std::fmt;

use lldp45::testset::ProblemName;

#[derive(Debug)]
pub enum BenchError {
    /// Bad arguments: unknown names, out-of-range options, unwritable
    /// output paths.
    Usage(String),
    /// The underlying integrator failed outside a recoverable context.
    Solver(lldp45::Error),
    /// The two tight reference runs disagree beyond the cross-check
    /// gate, so no relative error may be reported for this problem.
    ReferenceMismatch {
        problem: ProblemName,
        disagreement: f64,
    },
}

impl BenchError {
    pub fn usage(msg: impl Into<String>) -> Self {
        BenchError::Usage(msg.into())
    }
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::Usage(msg) => write!(f, "usage error: {msg}"),
            BenchError::Solver(e) => write!(f, "solver error: {e}"),
            BenchError::ReferenceMismatch {
                problem,
                disagreement,
            } => write!(
                f,
                "reference failure on {problem}: dual-method disagreement {disagreement:e} exceeds 1e-7"
            ),
        }
    }
}

impl std::error::Error for BenchError {}

impl From<lldp45::Error> for BenchError {
    fn from(e: lldp45::Error) -> Self {
        match e {
            lldp45::Error::Usage(msg) => BenchError::Usage(msg),
            other => BenchError::Solver(other),
        }
    }
}
