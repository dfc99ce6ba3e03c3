//! Single-step embedded formulas and their continuous extensions.
//!
//! `dp_step` is the classical Dormand-Prince 5(4) step. `lldp_step` is
//! its locally linearized counterpart: the flow of the Jacobian-based
//! linear part is taken from an augmented matrix exponential, and the
//! Runge-Kutta stages only integrate the nonlinear residual. Both share
//! the tableau, the FSAL structure and the continuous extension.

use crate::error::Error;
use crate::matexp::{exp_chain, PadeOrder};
use crate::matrix::DenseMatrix;
use crate::problem::{extract_u, OdeProblem};
use crate::stats::SolverStats;
use crate::tableau::dp45_tableau;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Lldp45,
    Dp45,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Lldp45 => write!(f, "lldp45"),
            Method::Dp45 => write!(f, "dp45"),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "lldp45" => Ok(Method::Lldp45),
            "dp45" | "ode45" => Ok(Method::Dp45),
            other => Err(Error::usage(format!("unknown method '{other}'"))),
        }
    }
}

/// Everything a single attempted step produces.
///
/// `err_vec` is formed directly from the weight differences
/// `h * sum_j (b_j - b_hat_j) k_j`; the linear increment cancels between
/// the two formulas, and forming the difference this way avoids the
/// cancellation of subtracting two nearby states. `fsal_f` is the stage-7
/// field value, which equals `f(t + h, y5)` because the last tableau row
/// repeats the 5th-order weights.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub y5: Vec<f64>,
    pub y4: Vec<f64>,
    pub err_vec: Vec<f64>,
    pub stages: [Vec<f64>; 7],
    pub u_s: Vec<f64>,
    pub fsal_f: Vec<f64>,
    /// Augmented matrix retained for dense output (locally linearized only).
    pub d_n: Option<DenseMatrix>,
}

/// One locally linearized Dormand-Prince step.
///
/// Builds the augmented matrix once, derives the exponentials at all
/// abscissae from one Padé evaluation, then runs the residual stages.
/// Six field evaluations when `fsal_in` is supplied, seven otherwise;
/// one Jacobian and one exponential chain either way.
pub fn lldp_step(
    p: &OdeProblem,
    t: f64,
    y: &[f64],
    h: f64,
    order: PadeOrder,
    fsal_in: Option<&[f64]>,
    stats: &mut SolverStats,
) -> Result<StepOutcome, Error> {
    if !(h > 0.0) {
        return Err(Error::usage("step size must be positive"));
    }
    let d = p.dim();
    let tab = dp45_tableau();

    let f_n = match fsal_in {
        Some(v) => v.to_vec(),
        None => {
            stats.f_evals += 1;
            p.eval_f(t, y)?
        }
    };
    let jac = p.eval_jacobian(t, y)?;
    stats.jacobian_evals += 1;
    let f_t_val = if p.autonomous() {
        None
    } else {
        Some(p.eval_f_t(t, y)?)
    };
    let d_n = p.augmented_from_parts(&jac, &f_n, f_t_val.as_deref());

    let chain = exp_chain(&d_n, h, order)?;
    stats.expm_evals += 1;

    // u_j = L e^{D c_j h} r at each abscissa; u_1 = 0 and u_7 = u_6 = u_s.
    let u: [Vec<f64>; 7] = [
        vec![0.0; d],
        extract_u(&chain.m_fifth, d)?,
        extract_u(&chain.m_three_tenths, d)?,
        extract_u(&chain.m_four_fifths, d)?,
        extract_u(&chain.m_eight_ninths, d)?,
        extract_u(&chain.m_one, d)?,
        extract_u(&chain.m_one, d)?,
    ];

    let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; d]);
    let mut fsal_f = vec![0.0; d];
    for j in 1..7 {
        let mut arg = y.to_vec();
        for m in 0..d {
            arg[m] += u[j][m];
        }
        for i in 0..j {
            let a = tab.a[j][i];
            for m in 0..d {
                arg[m] += h * a * k[i][m];
            }
        }
        stats.f_evals += 1;
        let fj = p.eval_f(t + tab.c[j] * h, &arg)?;
        let ju = jac.mat_vec(&u[j])?;
        let mut kj = vec![0.0; d];
        for m in 0..d {
            kj[m] = fj[m] - f_n[m] - ju[m];
        }
        if let Some(ft) = &f_t_val {
            let ch = tab.c[j] * h;
            for m in 0..d {
                kj[m] -= ft[m] * ch;
            }
        }
        if j == 6 {
            fsal_f = fj;
        }
        k[j] = kj;
    }

    let (y5, y4, err_vec) = combine(y, Some(&u[6]), &k, h);
    Ok(StepOutcome {
        y5,
        y4,
        err_vec,
        stages: k,
        u_s: u[6].clone(),
        fsal_f,
        d_n: Some(d_n),
    })
}

/// One classical Dormand-Prince step.
pub fn dp_step(
    p: &OdeProblem,
    t: f64,
    y: &[f64],
    h: f64,
    fsal_in: Option<&[f64]>,
    stats: &mut SolverStats,
) -> Result<StepOutcome, Error> {
    if !(h > 0.0) {
        return Err(Error::usage("step size must be positive"));
    }
    let d = p.dim();
    let tab = dp45_tableau();

    let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; d]);
    k[0] = match fsal_in {
        Some(v) => v.to_vec(),
        None => {
            stats.f_evals += 1;
            p.eval_f(t, y)?
        }
    };
    for j in 1..7 {
        let mut arg = y.to_vec();
        for i in 0..j {
            let a = tab.a[j][i];
            for m in 0..d {
                arg[m] += h * a * k[i][m];
            }
        }
        stats.f_evals += 1;
        k[j] = p.eval_f(t + tab.c[j] * h, &arg)?;
    }
    let fsal_f = k[6].clone();
    let (y5, y4, err_vec) = combine(y, None, &k, h);
    Ok(StepOutcome {
        y5,
        y4,
        err_vec,
        stages: k,
        u_s: vec![0.0; d],
        fsal_f,
        d_n: None,
    })
}

/// Dispatch on the method tag.
pub fn method_step(
    method: Method,
    p: &OdeProblem,
    t: f64,
    y: &[f64],
    h: f64,
    order: PadeOrder,
    fsal_in: Option<&[f64]>,
    stats: &mut SolverStats,
) -> Result<StepOutcome, Error> {
    match method {
        Method::Lldp45 => lldp_step(p, t, y, h, order, fsal_in, stats),
        Method::Dp45 => dp_step(p, t, y, h, fsal_in, stats),
    }
}

fn combine(
    y: &[f64],
    u_s: Option<&[f64]>,
    k: &[Vec<f64>; 7],
    h: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let tab = dp45_tableau();
    let d = y.len();
    let mut y5 = y.to_vec();
    if let Some(u) = u_s {
        for m in 0..d {
            y5[m] += u[m];
        }
    }
    for j in 0..7 {
        let b = tab.b[j];
        for m in 0..d {
            y5[m] += h * b * k[j][m];
        }
    }
    let mut err_vec = vec![0.0; d];
    for j in 0..7 {
        let e = tab.b[j] - tab.b_hat[j];
        for m in 0..d {
            err_vec[m] += h * e * k[j][m];
        }
    }
    let y4 = y5.iter().zip(&err_vec).map(|(a, e)| a - e).collect();
    (y5, y4, err_vec)
}

/// Continuous extension over one accepted step.
///
/// The weights are the quartic polynomials of the tableau. For the
/// locally linearized method the linear increment at `theta h` is
/// rebuilt through the same /90 product chain the step itself used, so
/// evaluation at `theta = 1` reproduces the accepted endpoint exactly.
#[derive(Clone, Debug)]
pub struct DenseInterpolant {
    pub method: Method,
    pub t_start: f64,
    pub h: f64,
    y_start: Vec<f64>,
    stages: [Vec<f64>; 7],
    d_n: Option<DenseMatrix>,
    pade: PadeOrder,
}

impl DenseInterpolant {
    pub fn from_step(
        outcome: &StepOutcome,
        method: Method,
        t_start: f64,
        y_start: &[f64],
        h: f64,
        pade: PadeOrder,
    ) -> Self {
        DenseInterpolant {
            method,
            t_start,
            h,
            y_start: y_start.to_vec(),
            stages: outcome.stages.clone(),
            d_n: outcome.d_n.clone(),
            pade,
        }
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + self.h
    }

    /// State at `t_start + theta * h`, `0 <= theta <= 1`.
    pub fn eval(&self, theta: f64) -> Result<Vec<f64>, Error> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::usage(format!(
                "interpolation parameter {theta} outside [0, 1]"
            )));
        }
        let d = self.y_start.len();
        let mut out = self.y_start.clone();
        if let (Method::Lldp45, Some(d_n)) = (self.method, &self.d_n) {
            if theta > 0.0 {
                let chain = exp_chain(d_n, theta * self.h, self.pade)?;
                let u = extract_u(&chain.m_one, d)?;
                for m in 0..d {
                    out[m] += u[m];
                }
            }
        }
        let tab = dp45_tableau();
        for j in 0..7 {
            let w = tab.dense_weight(j, theta);
            for m in 0..d {
                out[m] += self.h * w * self.stages[j][m];
            }
        }
        Ok(out)
    }
}

/// Which embedded formula advances the state in a fixed-mesh walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdvanceOrder {
    Five,
    Four,
}

/// Result of propagating over a prescribed mesh with no error control.
#[derive(Debug)]
pub struct MeshRun {
    /// States at the mesh points, starting with `x0`; truncated at the
    /// failing step when `failure` is set.
    pub states: Vec<Vec<f64>>,
    pub stats: SolverStats,
    /// Step index and cause of the first step-computation failure.
    pub failure: Option<(usize, Error)>,
}

/// Walks a fixed time mesh, accepting every step.
///
/// FSAL reuse applies only when advancing with the 5th-order result;
/// advancing with the embedded 4th-order formula re-evaluates the field
/// at each mesh point.
pub fn propagate_on_mesh(
    p: &OdeProblem,
    mesh: &[f64],
    method: Method,
    order: PadeOrder,
    advance: AdvanceOrder,
) -> Result<MeshRun, Error> {
    if mesh.len() < 2 {
        return Err(Error::usage("mesh needs at least two points"));
    }
    if mesh.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::usage("mesh must be strictly increasing"));
    }
    let mut stats = SolverStats::default();
    let mut states = Vec::with_capacity(mesh.len());
    let mut y = p.x0().to_vec();
    states.push(y.clone());
    let mut fsal: Option<Vec<f64>> = None;
    for (i, w) in mesh.windows(2).enumerate() {
        let h = w[1] - w[0];
        let res = method_step(method, p, w[0], &y, h, order, fsal.as_deref(), &mut stats);
        match res {
            Ok(out) => {
                y = out.y5.clone();
                match advance {
                    AdvanceOrder::Five => {
                        fsal = Some(out.fsal_f);
                    }
                    AdvanceOrder::Four => {
                        y = out.y4;
                        fsal = None;
                    }
                }
                states.push(y.clone());
                stats.accepted_steps += 1;
            }
            Err(e) if e.is_step_failure() => {
                return Ok(MeshRun {
                    states,
                    stats,
                    failure: Some((i, e)),
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(MeshRun {
        states,
        stats,
        failure: None,
    })
}
