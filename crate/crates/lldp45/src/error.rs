use std::fmt;

/// Errors raised by the integrators and their linear-algebra kernels.
///
/// `Singular`, `Overflow` and `NonFiniteField` are *step-computation*
/// failures: the adaptive loop treats them as a rejected step and retries
/// with a smaller step size. Everything else aborts the computation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Caller-side misuse: dimension mismatch, out-of-range argument,
    /// unknown problem name.
    Usage(String),
    /// A linear solve hit a zero or badly scaled pivot.
    Singular,
    /// A matrix exponential produced non-finite entries.
    Overflow,
    /// The vector field or one of its derivatives returned NaN or Inf.
    NonFiniteField { t: f64, state: Vec<f64> },
    /// The step size fell below the configured minimum without an
    /// accepted step.
    StepSizeUnderflow { t: f64, error_norm: f64 },
    /// Attempted-step cap exceeded; the integration is not advancing.
    TooManySteps { t: f64 },
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    /// True for failures the adaptive loop may recover from by
    /// shrinking the step size.
    pub fn is_step_failure(&self) -> bool {
        matches!(
            self,
            Error::Singular | Error::Overflow | Error::NonFiniteField { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
            Error::Singular => write!(f, "singular or badly scaled linear system"),
            Error::Overflow => write!(f, "matrix exponential overflowed to non-finite entries"),
            Error::NonFiniteField { t, .. } => {
                write!(
                    f,
                    "vector field evaluation returned non-finite values at t = {t}"
                )
            }
            Error::StepSizeUnderflow { t, error_norm } => write!(
                f,
                "step size underflow at t = {t} (last error norm {error_norm:e})"
            ),
            Error::TooManySteps { t } => {
                write!(f, "attempted-step limit exceeded at t = {t}")
            }
        }
    }
}

impl std::error::Error for Error {}
