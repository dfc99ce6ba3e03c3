//! Benchmark harness comparing the classical and locally linearized
//! Dormand-Prince pairs over a fixed problem set, in four studies:
//! same-partition accuracy (A), same-tolerance performance (B),
//! matched-accuracy performance (C) and dense-output accuracy (D).
//! Results are emitted as CSV or markdown tables.

mod error;
mod metrics;
mod reference;
mod report;
mod sims;

pub use error::BenchError;
pub use metrics::{relative_error, RE_DENOMINATOR_GUARD};
pub use reference::{
    reference_solution, ReferenceSolver, REFERENCE_ATOL, REFERENCE_CROSS_CHECK, REFERENCE_RTOL,
};
pub use report::{
    emit_report, render_csv, render_markdown, ReportFormat, RunStatus, Simulation,
    SimulationReport, TolClass, ToleranceSet, CSV_HEADER,
};
pub use sims::{
    run_simulation, simulation_a, simulation_b, simulation_c, simulation_d, MethodSel, SimOptions,
};
