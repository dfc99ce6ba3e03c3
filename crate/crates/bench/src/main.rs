use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use lldp45::testset::ProblemName;
use lldp45::PadeOrder;
use lldp45_bench::{
    emit_report, run_simulation, BenchError, MethodSel, ReportFormat, SimOptions, Simulation,
    TolClass,
};

/// Benchmark driver for the embedded Dormand-Prince pairs.
///
/// Exit codes: 0 on success, 1 on usage errors, 2 when any cell reports
/// an integration or reference failure (the report is still written).
#[derive(Parser, Debug)]
#[command(name = "bench", disable_help_subcommand = true)]
struct Cli {
    /// Simulation study: A (same partition), B (same tolerance),
    /// C (matched accuracy), D (dense output)
    #[arg(long)]
    sim: String,

    /// Problem name (perlin, pernolin, stifflin, stiffnolin, fpu,
    /// bruss, rigid, chm, vdp1, vdp100) or "all"
    #[arg(long)]
    problem: String,

    /// Tolerance class: crude, mild or refined
    #[arg(long)]
    tol: String,

    /// Tolerance scale factor for the locally linearized run (sim C)
    #[arg(long, default_value_t = 1.0)]
    scale: f64,

    /// Dense-output subdivisions per interval (sim D)
    #[arg(long, default_value_t = 4)]
    refine: u32,

    /// Method selection: lldp45, dp45 or both
    #[arg(long, default_value = "both")]
    method: String,

    /// Padé approximant orders p q
    #[arg(long, num_args = 2, value_names = ["P", "Q"], default_values_t = vec![3, 3])]
    pade: Vec<u32>,

    /// Maximum step size (default: a tenth of the interval)
    #[arg(long)]
    hmax: Option<f64>,

    /// Output format: csv or markdown
    #[arg(long, default_value = "csv")]
    format: String,

    /// Output file path
    #[arg(long)]
    out: PathBuf,
}

fn run(cli: &Cli) -> Result<bool, BenchError> {
    let sim: Simulation = cli.sim.parse()?;
    let tol: TolClass = cli.tol.parse()?;
    let format: ReportFormat = cli.format.parse()?;
    let methods: MethodSel = cli.method.parse()?;
    let pade = PadeOrder::new(cli.pade[0], cli.pade[1])?;
    let problems: Vec<ProblemName> = if cli.problem.eq_ignore_ascii_case("all") {
        ProblemName::ALL.to_vec()
    } else {
        vec![cli.problem.parse::<ProblemName>()?]
    };
    let opts = SimOptions {
        pade,
        h_max: cli.hmax,
        refine: cli.refine,
        scale: cli.scale,
        methods,
    };

    let mut reports = Vec::new();
    for problem in problems {
        let rows = run_simulation(sim, problem, tol, &opts)?;
        for row in &rows {
            if !row.status.is_ok() {
                eprintln!(
                    "warning: {} {} {} flagged {}",
                    row.simulation, row.problem, row.method, row.status
                );
            }
        }
        reports.extend(rows);
    }
    let any_failed = reports.iter().any(|r| !r.status.is_ok());
    emit_report(&reports, format, &cli.out)?;
    Ok(any_failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit 0
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(BenchError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
