//! Embedded Dormand-Prince integrators, classical and locally
//! linearized.
//!
//! The locally linearized variant splits each step into the exact flow
//! of the Jacobian-based linear part, obtained from a Padé approximation
//! of an augmented matrix exponential, plus a Runge-Kutta treatment of
//! the nonlinear residual on the shared Dormand-Prince tableau. The
//! split keeps the 5(4) convergence orders, makes the scheme A-stable
//! for A-acceptable Padé orders, and integrates linear systems to
//! essentially the accuracy of the exponential itself. Cost per step is
//! six field evaluations (as in the classical pair, via FSAL), one
//! Jacobian and one matrix exponential; the exponentials at all stage
//! abscissae come from a single Padé evaluation through a product chain.
//!
//! The crate also ships an adaptive loop with ode45-style step control,
//! continuous output over every accepted step, and a set of classical
//! benchmark problems.

mod adaptive;
mod error;
mod matexp;
mod matrix;
mod problem;
mod stats;
mod step;
mod tableau;
pub mod testset;

pub use adaptive::{error_norm, initial_step, integrate, next_step, AdaptiveConfig, SolutionPath};
pub use error::Error;
pub use matexp::{exp_chain, expm, pade_expm_core, ExpChain, PadeOrder};
pub use matrix::DenseMatrix;
pub use problem::{extract_u, FieldFn, JacobianFn, OdeProblem};
pub use stats::SolverStats;
pub use step::{
    dp_step, lldp_step, method_step, propagate_on_mesh, AdvanceOrder, DenseInterpolant, MeshRun,
    Method, StepOutcome,
};
pub use tableau::{dp45_tableau, EmbeddedTableau};
