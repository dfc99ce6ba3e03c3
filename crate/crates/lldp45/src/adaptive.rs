//! Adaptive integration loop in the ode45 style: initial step estimate,
//! mixed relative/absolute error norm, accept/reject control with a
//! failure memory, and final-step clipping so the mesh ends on `t_end`
//! exactly.

use std::time::Instant;

use crate::error::Error;
use crate::matexp::PadeOrder;
use crate::problem::OdeProblem;
use crate::stats::SolverStats;
use crate::step::{method_step, DenseInterpolant, Method};

/// Runaway guard; generous compared to any sane run.
const MAX_ATTEMPTED_STEPS: u64 = 10_000_000;

/// Tolerances, step bounds and method selection for one integration.
///
/// The absolute threshold `atol / rtol` is always derived, never stored.
#[derive(Clone, Copy, Debug)]
pub struct AdaptiveConfig {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub pade: PadeOrder,
    pub method: Method,
}

impl AdaptiveConfig {
    /// Defaults for a given problem: `h_max = (t_end - t0) / 10`,
    /// `h_min = 16 eps max(|t0|, |t_end|)`, Padé (3,3).
    pub fn for_problem(
        p: &OdeProblem,
        method: Method,
        rtol: f64,
        atol: f64,
    ) -> Result<Self, Error> {
        if !(rtol > 0.0 && rtol < 1.0) {
            return Err(Error::usage("rtol must lie in (0, 1)"));
        }
        if !(atol > 0.0) {
            return Err(Error::usage("atol must be positive"));
        }
        let h_max = (p.t_end() - p.t0()) / 10.0;
        let h_min = 16.0 * f64::EPSILON * p.t0().abs().max(p.t_end().abs());
        Ok(AdaptiveConfig {
            rtol,
            atol,
            h_max,
            h_min,
            pade: PadeOrder::default(),
            method,
        })
    }

    pub fn with_h_max(mut self, h_max: f64) -> Result<Self, Error> {
        if !(h_max > self.h_min) {
            return Err(Error::usage("h_max must exceed h_min"));
        }
        self.h_max = h_max;
        Ok(self)
    }

    pub fn with_pade(mut self, pade: PadeOrder) -> Self {
        self.pade = pade;
        self
    }

    /// `tr = atol / rtol`, the floor used in the error denominators.
    pub fn threshold(&self) -> f64 {
        self.atol / self.rtol
    }
}

/// Initial step estimate from the field magnitude at the initial point:
/// `r_h = max_i |f^i(x0)| / max(|x0^i|, tr) / (0.8 rtol^{1/5})`, then
/// `h0 = min(h_max, max(h_min, delta))` with `delta = 1 / r_h` when
/// `h_max r_h > 1` and `h_max` otherwise.
///
/// `f0` is the already evaluated field at `(t0, x0)`; it seeds the first
/// step's FSAL slot, so the estimate costs nothing extra.
pub fn initial_step(p: &OdeProblem, cfg: &AdaptiveConfig, f0: &[f64]) -> f64 {
    let tr = cfg.threshold();
    let mut quotient = 0.0f64;
    for (fi, xi) in f0.iter().zip(p.x0()) {
        quotient = quotient.max(fi.abs() / xi.abs().max(tr));
    }
    let r_h = quotient / (0.8 * cfg.rtol.powf(0.2));
    let delta = if cfg.h_max * r_h > 1.0 {
        1.0 / r_h
    } else {
        cfg.h_max
    };
    delta.max(cfg.h_min).min(cfg.h_max)
}

/// Scaled error norm: `max_i |err_i| / max(|y_prev_i|, |y5_i|, tr)`.
/// Any non-finite component yields infinity so the step is rejected.
pub fn error_norm(y_prev: &[f64], y5: &[f64], err_vec: &[f64], cfg: &AdaptiveConfig) -> f64 {
    let tr = cfg.threshold();
    let mut norm = 0.0f64;
    for i in 0..err_vec.len() {
        let denom = y_prev[i].abs().max(y5[i].abs()).max(tr);
        let q = err_vec[i].abs() / denom;
        if !q.is_finite() {
            return f64::INFINITY;
        }
        norm = norm.max(q);
    }
    norm
}

/// Step-size update with three branches: accepted growth, first-failure
/// shrink floored at 0.1, and repeat-failure halving. The result is
/// clamped to `[h_min, h_max]`; a vanishing error maximizes growth.
pub fn next_step(h: f64, error: f64, fail: bool, cfg: &AdaptiveConfig) -> f64 {
    let delta = if error <= cfg.rtol {
        if error == 0.0 {
            f64::INFINITY
        } else {
            0.8 * (cfg.rtol / error).powf(0.2) * h
        }
    } else if !fail {
        (0.8 * (cfg.rtol / error).powf(0.2)).max(0.1) * h
    } else {
        0.5 * h
    };
    delta.max(cfg.h_min).min(cfg.h_max)
}

/// Accepted mesh, states, per-interval interpolants and counters.
#[derive(Debug)]
pub struct SolutionPath {
    pub mesh: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub interpolants: Vec<DenseInterpolant>,
    pub stats: SolverStats,
}

impl SolutionPath {
    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("non-empty path")
    }

    /// State at an arbitrary time inside the integration interval:
    /// the stored state at mesh points, otherwise the interval's
    /// continuous extension.
    pub fn sample(&self, t: f64) -> Result<Vec<f64>, Error> {
        let first = *self.mesh.first().unwrap();
        let last = *self.mesh.last().unwrap();
        if !(first..=last).contains(&t) {
            return Err(Error::usage(format!(
                "sample time {t} outside [{first}, {last}]"
            )));
        }
        // index of the interval [mesh[i], mesh[i+1]] containing t
        let idx = match self.mesh.binary_search_by(|m| m.partial_cmp(&t).unwrap()) {
            Ok(i) => return Ok(self.states[i].clone()),
            Err(i) => i.saturating_sub(1).min(self.interpolants.len() - 1),
        };
        let di = &self.interpolants[idx];
        let theta = ((t - di.t_start) / di.h).clamp(0.0, 1.0);
        di.eval(theta)
    }
}

/// Runs the adaptive loop from `t0` to `t_end`.
///
/// A step is accepted when its error norm is at most `rtol`; rejections
/// set the failure flag so a second consecutive rejection halves the
/// step. Step-computation failures (singular Padé denominator, overflow,
/// non-finite field values) count as failed steps with infinite error,
/// so the same shrink logic applies. When `1.1 h` covers the remaining
/// interval the step is stretched to land on `t_end` exactly.
pub fn integrate(p: &OdeProblem, cfg: &AdaptiveConfig) -> Result<SolutionPath, Error> {
    if !(cfg.h_min < cfg.h_max) {
        return Err(Error::usage("h_min must be below h_max"));
    }
    let start = Instant::now();
    let mut stats = SolverStats::default();

    let t_end = p.t_end();
    let mut t = p.t0();
    let mut y = p.x0().to_vec();

    let f0 = p.eval_f(t, &y)?;
    stats.f_evals += 1;
    let mut h = initial_step(p, cfg, &f0);
    let mut f_n = f0;

    let mut mesh = vec![t];
    let mut states = vec![y.clone()];
    let mut interpolants = Vec::new();
    let mut fail = false;
    let mut attempts: u64 = 0;

    while t < t_end {
        attempts += 1;
        if attempts > MAX_ATTEMPTED_STEPS {
            return Err(Error::TooManySteps { t });
        }
        let remaining = t_end - t;
        let last = 1.1 * h >= remaining;
        if last {
            h = remaining;
        }

        let step_res = method_step(cfg.method, p, t, &y, h, cfg.pade, Some(&f_n), &mut stats);
        let error = match &step_res {
            Ok(out) => error_norm(&y, &out.y5, &out.err_vec, cfg),
            Err(e) if e.is_step_failure() => f64::INFINITY,
            Err(e) => return Err(e.clone()),
        };
        let h_new = next_step(h, error, fail, cfg);

        if error <= cfg.rtol {
            let out = step_res.unwrap();
            interpolants.push(DenseInterpolant::from_step(
                &out, cfg.method, t, &y, h, cfg.pade,
            ));
            t = if last { t_end } else { t + h };
            y = out.y5;
            f_n = out.fsal_f;
            mesh.push(t);
            states.push(y.clone());
            stats.accepted_steps += 1;
            fail = false;
            h = h_new;
        } else {
            stats.failed_steps += 1;
            if h <= cfg.h_min {
                return Err(Error::StepSizeUnderflow {
                    t,
                    error_norm: error,
                });
            }
            fail = true;
            h = h_new;
        }
    }

    stats.wall_time = start.elapsed();
    Ok(SolutionPath {
        mesh,
        states,
        interpolants,
        stats,
    })
}
