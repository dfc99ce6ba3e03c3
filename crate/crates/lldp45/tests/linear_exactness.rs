//! On linear problems the locally linearized stages cancel and the step
//! inherits the accuracy of the exponential itself. Checked on the two
//! linear benchmark problems with their closed-form solutions.

use lldp45::testset::{analytic_reference, make_problem, ProblemName};
use lldp45::{integrate, lldp_step, AdaptiveConfig, Method, PadeOrder, SolverStats};

fn max_rel_error_on_mesh(name: ProblemName, mesh: &[f64], states: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (t, y) in mesh.iter().zip(states) {
        let x = analytic_reference(name, *t).unwrap();
        for (xi, yi) in x.iter().zip(y) {
            if xi.abs() < 1e-12 {
                continue;
            }
            worst = worst.max(((xi - yi) / xi).abs());
        }
    }
    worst
}

#[test]
fn stage_cancellation_on_linear_problems() {
    for name in [ProblemName::StiffLin, ProblemName::PerLin] {
        let p = make_problem(name).problem;
        let y0 = p.x0().to_vec();
        let mut stats = SolverStats::default();
        let h = 0.05;
        let out = lldp_step(&p, 0.0, &y0, h, PadeOrder::default(), None, &mut stats).unwrap();
        // The cancellation f(y + u) - f(y) - J u leaves only rounding,
        // which scales with the magnitudes entering it: the state, the
        // field and the Jacobian acting on the increment.
        let ynorm: f64 = y0.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let fnorm: f64 = p
            .eval_f(0.0, &y0)
            .unwrap()
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        let jnorm = p.eval_jacobian(0.0, &y0).unwrap().inf_norm();
        let scale = 1.0 + ynorm + h * fnorm * (1.0 + h * jnorm);
        for (j, k) in out.stages.iter().enumerate() {
            for v in k {
                assert!(
                    v.abs() <= 1e-12 * scale,
                    "{name}: stage {j} residual {v:e} vs scale {scale:e}"
                );
            }
        }
        for (a, b) in out.y5.iter().zip(&out.y4) {
            assert!((a - b).abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn stifflin_adaptive_run_is_exact_to_exponential_accuracy() {
    let p = make_problem(ProblemName::StiffLin).problem;
    let cfg = AdaptiveConfig::for_problem(&p, Method::Lldp45, 1e-3, 1e-6).unwrap();
    let path = integrate(&p, &cfg).unwrap();
    assert!(
        path.stats.accepted_steps <= 30,
        "steps {}",
        path.stats.accepted_steps
    );
    let re = max_rel_error_on_mesh(ProblemName::StiffLin, &path.mesh, &path.states);
    assert!(re <= 1e-10, "relative error {re:e}");
}

#[test]
fn perlin_adaptive_run_tracks_the_rotation() {
    let p = make_problem(ProblemName::PerLin).problem;
    let cfg = AdaptiveConfig::for_problem(&p, Method::Lldp45, 1e-3, 1e-6).unwrap();
    let path = integrate(&p, &cfg).unwrap();
    assert!(
        path.stats.accepted_steps <= 30,
        "steps {}",
        path.stats.accepted_steps
    );
    let re = max_rel_error_on_mesh(ProblemName::PerLin, &path.mesh, &path.states);
    assert!(re <= 1e-6, "relative error {re:e}");
}

#[test]
fn single_lldp_steps_remain_contractive_on_stiff_scalars() {
    // dx/dt = lambda x with lambda h far beyond the explicit stability
    // region: one locally linearized step must not grow.
    for lambda in [-1e2, -1e4, -1e6] {
        let p = lldp45::OdeProblem::new(
            1,
            true,
            0.0,
            10.0,
            vec![1.0],
            Box::new(move |_t, x, out| out[0] = lambda * x[0]),
        )
        .unwrap()
        .with_jacobian(Box::new(move |_t, _x, jac| jac.set(0, 0, lambda)));
        let mut stats = SolverStats::default();
        let out = lldp_step(&p, 0.0, &[1.0], 1.0, PadeOrder::default(), None, &mut stats).unwrap();
        assert!(
            out.y5[0].abs() <= 1.0,
            "lambda {lambda}: |y1| = {}",
            out.y5[0].abs()
        );
    }
}
