//! The benchmark problem set: two oscillatory semilinear systems, two
//! stiff semilinear systems built on the Hilbert matrix, and six
//! classical nonlinear equations (Fermi-Pasta-Ulam, Brusselator, rigid
//! body, a chemical reaction, Van der Pol in two stiffness regimes).
//!
//! The two oscillatory examples are stated on complex diagonal systems
//! `dz/dt = A(z + 2) [+ 0.1 z^2]` with `A = diag(i, -i)`; they are
//! realified here, each complex component `z = u + i v` becoming the
//! pair `(u, v)`, with squares expanded as `(u^2 - v^2, 2 u v)`. State
//! order is `(Re z1, Im z1, Re z2, Im z2)`.
//!
//! Van der Pol is implemented in the standard form
//! `x1' = x2, x2' = eps (1 - x1^2) x2 - x1` (Hairer & Wanner).
//!
//! The Fermi-Pasta-Ulam state is ordered `(p1..p6, q1..q6)` with fixed
//! ends `q0 = q7 = 0`; the stated initial data `1, 1, 1/w, 1` fills the
//! first four momentum components.

use crate::error::Error;
use crate::matexp::{expm, PadeOrder};
use crate::matrix::DenseMatrix;
use crate::problem::OdeProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemName {
    PerLin,
    PerNoLin,
    StiffLin,
    StiffNoLin,
    Fpu,
    Bruss,
    Rigid,
    Chm,
    Vdp1,
    Vdp100,
}

impl ProblemName {
    pub const ALL: [ProblemName; 10] = [
        ProblemName::PerLin,
        ProblemName::PerNoLin,
        ProblemName::StiffLin,
        ProblemName::StiffNoLin,
        ProblemName::Fpu,
        ProblemName::Bruss,
        ProblemName::Rigid,
        ProblemName::Chm,
        ProblemName::Vdp1,
        ProblemName::Vdp100,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemName::PerLin => "perlin",
            ProblemName::PerNoLin => "pernolin",
            ProblemName::StiffLin => "stifflin",
            ProblemName::StiffNoLin => "stiffnolin",
            ProblemName::Fpu => "fpu",
            ProblemName::Bruss => "bruss",
            ProblemName::Rigid => "rigid",
            ProblemName::Chm => "chm",
            ProblemName::Vdp1 => "vdp1",
            ProblemName::Vdp100 => "vdp100",
        }
    }
}

impl std::fmt::Display for ProblemName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ProblemName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        ProblemName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::usage(format!("unknown problem '{s}'")))
    }
}

pub type ReferenceFn = Box<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// A fully specified benchmark problem, with a closed-form reference
/// where one exists (the two linear examples).
pub struct NamedProblem {
    pub name: ProblemName,
    pub problem: OdeProblem,
    pub reference: Option<ReferenceFn>,
}

/// Hilbert matrix `H_ij = 1 / (i + j - 1)` (1-based).
pub fn hilbert(n: usize) -> DenseMatrix {
    let mut h = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h.set(i, j, 1.0 / ((i + j + 1) as f64));
        }
    }
    h
}

/// Closed-form solution for the two linear examples; every other name is
/// a usage error.
pub fn analytic_reference(name: ProblemName, t: f64) -> Result<Vec<f64>, Error> {
    match name {
        ProblemName::PerLin => {
            // z_k(t) = -2 + e^{+-i t} (z_k(0) + 2), realified
            let (c, s) = (t.cos(), t.sin());
            Ok(vec![-2.0 - 0.5 * c, -0.5 * s, -2.0 + 0.5 * c, -0.5 * s])
        }
        ProblemName::StiffLin => {
            // x(t) = -1 + e^{-100 H t} (x0 + 1), x0 + 1 = 2
            let a = hilbert(12).scaled(-100.0);
            let (m, _) = expm(&a, t, PadeOrder::new(6, 6)?)?;
            let u = m.mat_vec(&[2.0; 12])?;
            Ok(u.iter().map(|v| v - 1.0).collect())
        }
        other => Err(Error::usage(format!(
            "no closed-form reference for '{other}'"
        ))),
    }
}

pub fn make_problem(name: ProblemName) -> NamedProblem {
    let problem = match name {
        ProblemName::PerLin => per_lin(),
        ProblemName::PerNoLin => per_no_lin(),
        ProblemName::StiffLin => stiff_lin(),
        ProblemName::StiffNoLin => stiff_no_lin(),
        ProblemName::Fpu => fpu(),
        ProblemName::Bruss => bruss(),
        ProblemName::Rigid => rigid(),
        ProblemName::Chm => chm(),
        ProblemName::Vdp1 => vdp(1.0, 20.0),
        ProblemName::Vdp100 => vdp(100.0, 300.0),
    };
    let reference: Option<ReferenceFn> = match name {
        ProblemName::PerLin | ProblemName::StiffLin => Some(Box::new(move |t| {
            analytic_reference(name, t).expect("closed form exists")
        })),
        _ => None,
    };
    NamedProblem {
        name,
        problem,
        reference,
    }
}

fn per_lin() -> OdeProblem {
    OdeProblem::new(
        4,
        true,
        0.0,
        4.0 * std::f64::consts::PI,
        vec![-2.5, 0.0, -1.5, 0.0],
        Box::new(|_t, x, out| {
            out[0] = -x[1];
            out[1] = x[0] + 2.0;
            out[2] = x[3];
            out[3] = -(x[2] + 2.0);
        }),
    )
    .unwrap()
    .with_jacobian(Box::new(|_t, _x, jac| {
        jac.set(0, 1, -1.0);
        jac.set(1, 0, 1.0);
        jac.set(2, 3, 1.0);
        jac.set(3, 2, -1.0);
    }))
}

fn per_no_lin() -> OdeProblem {
    OdeProblem::new(
        4,
        true,
        0.0,
        4.0 * std::f64::consts::PI,
        vec![1.0, 0.0, 1.0, 0.0],
        Box::new(|_t, x, out| {
            let (u1, v1, u2, v2) = (x[0], x[1], x[2], x[3]);
            out[0] = -v1 + 0.1 * (u1 * u1 - v1 * v1);
            out[1] = (u1 + 2.0) + 0.2 * u1 * v1;
            out[2] = v2 + 0.1 * (u2 * u2 - v2 * v2);
            out[3] = -(u2 + 2.0) + 0.2 * u2 * v2;
        }),
    )
    .unwrap()
    .with_jacobian(Box::new(|_t, x, jac| {
        let (u1, v1, u2, v2) = (x[0], x[1], x[2], x[3]);
        jac.set(0, 0, 0.2 * u1);
        jac.set(0, 1, -1.0 - 0.2 * v1);
        jac.set(1, 0, 1.0 + 0.2 * v1);
        jac.set(1, 1, 0.2 * u1);
        jac.set(2, 2, 0.2 * u2);
        jac.set(2, 3, 1.0 - 0.2 * v2);
        jac.set(3, 2, -1.0 + 0.2 * v2);
        jac.set(3, 3, 0.2 * u2);
    }))
}

fn stiff_lin() -> OdeProblem {
    let h = hilbert(12);
    let h_jac = h.clone();
    OdeProblem::new(
        12,
        true,
        0.0,
        1.0,
        vec![1.0; 12],
        Box::new(move |_t, x, out| {
            for i in 0..12 {
                let mut s = 0.0;
                for j in 0..12 {
                    s += h.get(i, j) * (x[j] + 1.0);
                }
                out[i] = -100.0 * s;
            }
        }),
    )
    .unwrap()
    .with_jacobian(Box::new(move |_t, _x, jac| {
        for i in 0..12 {
            for j in 0..12 {
                jac.set(i, j, -100.0 * h_jac.get(i, j));
            }
        }
    }))
}

fn stiff_no_lin() -> OdeProblem {
    let h = hilbert(12);
    let h_jac = h.clone();
    OdeProblem::new(
        12,
        true,
        0.0,
        1.0,
        vec![-0.5; 12],
        Box::new(move |_t, x, out| {
            for i in 0..12 {
                let mut s = 0.0;
                for j in 0..12 {
                    s += h.get(i, j) * (x[j] - 1.0);
                }
                let d = x[i] - 1.0;
                out[i] = 100.0 * s + 100.0 * d * d - 60.0 * (x[i] * x[i] * x[i] - 1.0);
            }
        }),
    )
    .unwrap()
    .with_jacobian(Box::new(move |_t, x, jac| {
        for i in 0..12 {
            for j in 0..12 {
                jac.set(i, j, 100.0 * h_jac.get(i, j));
            }
            let extra = 200.0 * (x[i] - 1.0) - 180.0 * x[i] * x[i];
            jac.set(i, i, jac.get(i, i) + extra);
        }
    }))
}

/// Fermi-Pasta-Ulam lattice of three stiff springs alternating with
/// quartic soft springs, fixed ends. State `(p1..p6, q1..q6)`:
///
/// `dp_{2i-1}/dt =  (w^2/2)(q_{2i} - q_{2i-1}) - 4 (q_{2i-1} - q_{2i-2})^3`
/// `dp_{2i}/dt   = -(w^2/2)(q_{2i} - q_{2i-1}) + 4 (q_{2i+1} - q_{2i})^3`
fn fpu() -> OdeProblem {
    let w = 50.0f64;
    let c = w * w / 2.0;
    let mut x0 = vec![0.0; 12];
    x0[0] = 1.0;
    x0[1] = 1.0;
    x0[2] = 1.0 / w;
    x0[3] = 1.0;
    OdeProblem::new(
        12,
        true,
        0.0,
        15.0,
        x0,
        Box::new(move |_t, x, out| {
            let q = &x[6..12];
            // soft-spring differences with q0 = q7 = 0
            let soft = [q[0], q[2] - q[1], q[4] - q[3], -q[5]];
            for i in 0..3 {
                let stiff = c * (q[2 * i + 1] - q[2 * i]);
                out[2 * i] = stiff - 4.0 * soft[i].powi(3);
                out[2 * i + 1] = -stiff + 4.0 * soft[i + 1].powi(3);
            }
            out[6..12].copy_from_slice(&x[0..6]);
        }),
    )
    .unwrap()
    .with_jacobian(Box::new(move |_t, x, jac| {
        let q = &x[6..12];
        let soft = [q[0], q[2] - q[1], q[4] - q[3], -q[5]];
        let d: Vec<f64> = soft.iter().map(|s| 12.0 * s * s).collect();
        for i in 0..3 {
            let (r1, r2) = (2 * i, 2 * i + 1);
            // stiff spring inside the pair
            jac.set(r1, 6 + r1, -c);
            jac.set(r1, 6 + r2, c);
            jac.set(r2, 6 + r1, c);
            jac.set(r2, 6 + r2, -c);
            // soft spring behind the pair (tied to the wall for i = 0)
            jac.set(r1, 6 + r1, jac.get(r1, 6 + r1) - d[i]);
            if i > 0 {
                jac.set(r1, 6 + r1 - 1, d[i]);
            }
            // soft spring ahead of the pair (wall for i = 2)
            jac.set(r2, 6 + r2, jac.get(r2, 6 + r2) - d[i + 1]);
            if i < 2 {
                jac.set(r2, 6 + r2 + 1, d[i + 1]);
            }
        }
        for i in 0..6 {
            jac.set(6 + i, i, 1.0);
        }
    }))
}

/// Hamiltonian of the Fermi-Pasta-Ulam lattice, a conservation oracle
/// for accurate trajectories.
pub fn fpu_hamiltonian(state: &[f64]) -> f64 {
    let w = 50.0;
    let (p, q) = state.split_at(6);
    let kinetic: f64 = 0.5 * p.iter().map(|v| v * v).sum::<f64>();
    let stiff =
        (w * w / 4.0) * ((q[1] - q[0]).powi(2) + (q[3] - q[2]).powi(2) + (q[5] - q[4]).powi(2));
    let soft = q[0].powi(4) + (q[2] - q[1]).powi(4) + (q[4] - q[3]).powi(4) + q[5].powi(4);
    kinetic + stiff + soft
}

fn bruss() -> OdeProblem {
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

fn rigid() -> OdeProblem {
    OdeProblem::new(
        3,
        true,
        0.0,
        12.0,
        vec![0.0, 1.0, 1.0],
        Box::new(|_t, x, out| {
            out[0] = x[1] * x[2];
            out[1] = -x[0] * x[2];
            out[2] = -0.51 * x[0] * x[1];
        }),
    )
    .unwrap()
    .with_jacobian(Box::new(|_t, x, jac| {
        jac.set(0, 1, x[2]);
        jac.set(0, 2, x[1]);
        jac.set(1, 0, -x[2]);
        jac.set(1, 2, -x[0]);
        jac.set(2, 0, -0.51 * x[1]);
        jac.set(2, 1, -0.51 * x[0]);
    }))
}

fn chm() -> OdeProblem {
    let k = |x1: f64| (20.7 - 1500.0 / x1).exp();
    OdeProblem::new(
        4,
        true,
        0.0,
        1.0,
        vec![50.0, 0.0, 600.0, 0.1],
        Box::new(move |_t, x, out| {
            let kv = k(x[0]);
            out[0] = 1.3 * (x[2] - x[0]) + 10400.0 * kv * x[1];
            out[1] = 1880.0 * (x[3] - x[1] * (1.0 + kv));
            out[2] = 1752.0 - 269.0 * x[2] + 267.0 * x[0];
            out[3] = 0.1 + 320.0 * x[1] - 321.0 * x[3];
        }),
    )
    .unwrap()
    .with_jacobian(Box::new(move |_t, x, jac| {
        let kv = k(x[0]);
        let kp = kv * 1500.0 / (x[0] * x[0]);
        jac.set(0, 0, -1.3 + 10400.0 * x[1] * kp);
        jac.set(0, 1, 10400.0 * kv);
        jac.set(0, 2, 1.3);
        jac.set(1, 0, -1880.0 * x[1] * kp);
        jac.set(1, 1, -1880.0 * (1.0 + kv));
        jac.set(1, 3, 1880.0);
        jac.set(2, 0, 267.0);
        jac.set(2, 2, -269.0);
        jac.set(3, 1, 320.0);
        jac.set(3, 3, -321.0);
    }))
}

fn vdp(eps: f64, t_end: f64) -> OdeProblem {
    OdeProblem::new(
        2,
        true,
        0.0,
        t_end,
        vec![2.0, 0.0],
        Box::new(move |_t, x, out| {
            out[0] = x[1];
            out[1] = eps * (1.0 - x[0] * x[0]) * x[1] - x[0];
        }),
    )
    .unwrap()
    .with_jacobian(Box::new(move |_t, x, jac| {
        jac.set(0, 1, 1.0);
        jac.set(1, 0, -2.0 * eps * x[0] * x[1] - 1.0);
        jac.set(1, 1, eps * (1.0 - x[0] * x[0]));
    }))
}
