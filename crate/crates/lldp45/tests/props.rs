//! Property tests for the exponential kernels, the step controller and
//! the continuous extension.

use lldp45::{
    dp_step, error_norm, exp_chain, expm, lldp_step, next_step, AdaptiveConfig, DenseInterpolant,
    DenseMatrix, Method, OdeProblem, PadeOrder, SolverStats,
};
use proptest::prelude::*;

fn bruss_problem() -> OdeProblem {
    OdeProblem::new(
        2,
        true,
        0.0,
        20.0,
        vec![1.5, 3.0],
        Box::new(|_t, x, out| {
            out[0] = 1.0 + x[0] * x[0] * x[1] - 4.0 * x[0];
            out[1] = 3.0 * x[0] - x[0] * x[0] * x[1];
        }),
    )
    .unwrap()
    .with_jacobian(Box::new(|_t, x, jac| {
        jac.set(0, 0, 2.0 * x[0] * x[1] - 4.0);
        jac.set(0, 1, x[0] * x[0]);
        jac.set(1, 0, 3.0 - 2.0 * x[0] * x[1]);
        jac.set(1, 1, -x[0] * x[0]);
    }))
}

proptest! {
    #[test]
    fn diagonal_exponentials_match_scalars(
        entries in proptest::collection::vec(-10.0f64..10.0, 1..8),
        h in 0.1f64..1.0,
    ) {
        // keep |entry * h| <= 10
        let n = entries.len();
        let mut a = DenseMatrix::zeros(n, n);
        for (i, v) in entries.iter().enumerate() {
            a.set(i, i, *v);
        }
        let (r, _) = expm(&a, h, PadeOrder::new(6, 6).unwrap()).unwrap();
        for (i, v) in entries.iter().enumerate() {
            let exact = (v * h).exp();
            prop_assert!((r.get(i, i) - exact).abs() <= 1e-9 * exact.max(1e-300));
        }
    }

    #[test]
    fn chain_semigroup_identities_hold_bitwise(
        entries in proptest::collection::vec(-1.0f64..1.0, 9),
        h in 0.01f64..2.0,
    ) {
        let d = DenseMatrix::new(3, 3, entries).unwrap();
        let chain = exp_chain(&d, h, PadeOrder::default()).unwrap();
        prop_assert_eq!(chain.m_fifth.mat_mul(&chain.m_fifth).unwrap(), chain.m_two_fifths.clone());
        prop_assert_eq!(chain.m_two_fifths.mat_mul(&chain.m_two_fifths).unwrap(), chain.m_four_fifths.clone());
        prop_assert_eq!(chain.m_tenth.mat_mul(&chain.m_fifth).unwrap(), chain.m_three_tenths.clone());
        prop_assert_eq!(chain.m_four_fifths.mat_mul(&chain.m_fifth).unwrap(), chain.m_one.clone());
    }

    #[test]
    fn controller_output_is_always_clamped(
        h in 1e-6f64..10.0,
        error in 0.0f64..1e6,
        fail in any::<bool>(),
    ) {
        let p = bruss_problem();
        let cfg = AdaptiveConfig::for_problem(&p, Method::Dp45, 1e-3, 1e-6).unwrap();
        let h_new = next_step(h, error, fail, &cfg);
        prop_assert!(h_new >= cfg.h_min && h_new <= cfg.h_max);
    }

    #[test]
    fn controller_shrinks_harder_for_larger_errors(
        h in 1e-3f64..1.0,
        e1 in 1e-2f64..1e2,
        factor in 1.5f64..100.0,
    ) {
        let p = bruss_problem();
        let cfg = AdaptiveConfig::for_problem(&p, Method::Dp45, 1e-3, 1e-6).unwrap();
        let a = next_step(h, e1 * cfg.rtol, false, &cfg);
        let b = next_step(h, e1 * factor * cfg.rtol, false, &cfg);
        prop_assert!(b <= a);
    }

    #[test]
    fn error_norm_is_scale_floored(
        err in -1.0f64..1.0,
        y in -1e-6f64..1e-6,
    ) {
        let p = bruss_problem();
        let cfg = AdaptiveConfig::for_problem(&p, Method::Dp45, 1e-3, 1e-6).unwrap();
        // states below tr = 1e-3 floor the denominator at tr
        let norm = error_norm(&[y], &[y], &[err], &cfg);
        prop_assert!((norm - err.abs() / cfg.threshold()).abs() <= 1e-12 * norm.max(1.0));
    }

    #[test]
    fn dense_interpolants_hit_both_endpoints(
        h in 0.01f64..0.4,
        x0 in 0.5f64..2.5,
        y0 in 1.0f64..4.0,
    ) {
        let p = bruss_problem();
        let start = [x0, y0];
        for method in [Method::Lldp45, Method::Dp45] {
            let mut stats = SolverStats::default();
            let out = match method {
                Method::Lldp45 => {
                    lldp_step(&p, 0.0, &start, h, PadeOrder::default(), None, &mut stats).unwrap()
                }
                Method::Dp45 => dp_step(&p, 0.0, &start, h, None, &mut stats).unwrap(),
            };
            let di = DenseInterpolant::from_step(&out, method, 0.0, &start, h, PadeOrder::default());
            prop_assert_eq!(di.eval(0.0).unwrap(), start.to_vec());
            let end = di.eval(1.0).unwrap();
            for m in 0..2 {
                // relative to what the weighted sums actually touch: the
                // state, or the stage magnitudes when a trial step is
                // wild enough that they dominate
                let kmax = out
                    .stages
                    .iter()
                    .map(|k| k[m].abs())
                    .fold(0.0f64, f64::max);
                let scale = out.y5[m].abs().max(h * kmax).max(1e-300);
                let rel = (end[m] - out.y5[m]).abs() / scale;
                prop_assert!(rel <= 1e-12, "rel {}", rel);
            }
        }
    }
}
