//! Initial value problem description: vector field, Jacobians (analytic
//! or finite-difference), and the augmented matrix whose exponential
//! carries the locally linearized increment.

use crate::error::Error;
use crate::matrix::DenseMatrix;

pub type FieldFn = Box<dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync>;
pub type JacobianFn = Box<dyn Fn(f64, &[f64], &mut DenseMatrix) + Send + Sync>;

/// A d-dimensional initial value problem on `[t0, t_end]`.
///
/// The field and its derivatives are plain callbacks; the problem itself
/// is immutable and shareable, and evaluation counters live with the
/// caller so concurrent integrations do not interfere.
pub struct OdeProblem {
    dim: usize,
    autonomous: bool,
    t0: f64,
    t_end: f64,
    x0: Vec<f64>,
    f: FieldFn,
    jacobian: Option<JacobianFn>,
    f_t: Option<FieldFn>,
}

impl OdeProblem {
    pub fn new(
        dim: usize,
        autonomous: bool,
        t0: f64,
        t_end: f64,
        x0: Vec<f64>,
        f: FieldFn,
    ) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::usage("problem dimension must be at least 1"));
        }
        if !(t0 < t_end) {
            return Err(Error::usage("t0 must be strictly below t_end"));
        }
        if x0.len() != dim {
            return Err(Error::usage(
                "initial state length does not match dimension",
            ));
        }
        Ok(OdeProblem {
            dim,
            autonomous,
            t0,
            t_end,
            x0,
            f,
            jacobian: None,
            f_t: None,
        })
    }

    pub fn with_jacobian(mut self, jacobian: JacobianFn) -> Self {
        self.jacobian = Some(jacobian);
        self
    }

    /// Analytic time derivative of the field. Rejected for autonomous
    /// problems, where it is identically zero.
    pub fn with_f_t(mut self, f_t: FieldFn) -> Result<Self, Error> {
        if self.autonomous {
            return Err(Error::usage(
                "autonomous problems have no time derivative of the field",
            ));
        }
        self.f_t = Some(f_t);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn autonomous(&self) -> bool {
        self.autonomous
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    /// Dimension of the augmented matrix: d+1 autonomous, d+2 otherwise.
    pub fn augmented_dim(&self) -> usize {
        self.dim + if self.autonomous { 1 } else { 2 }
    }

    /// Evaluates the vector field, rejecting non-finite output.
    pub fn eval_f(&self, t: f64, x: &[f64]) -> Result<Vec<f64>, Error> {
        if x.len() != self.dim {
            return Err(Error::usage("state length does not match dimension"));
        }
        let mut out = vec![0.0; self.dim];
        (self.f)(t, x, &mut out);
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteField {
                t,
                state: x.to_vec(),
            });
        }
        Ok(out)
    }

    /// Analytic Jacobian when supplied, otherwise central finite
    /// differences with increment `sqrt(eps) * max(|x_i|, 1)` per column.
    pub fn eval_jacobian(&self, t: f64, x: &[f64]) -> Result<DenseMatrix, Error> {
        if x.len() != self.dim {
            return Err(Error::usage("state length does not match dimension"));
        }
        let mut jac = DenseMatrix::zeros(self.dim, self.dim);
        if let Some(j) = &self.jacobian {
            j(t, x, &mut jac);
        } else {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            for i in 0..self.dim {
                let eps = f64::EPSILON.sqrt() * x[i].abs().max(1.0);
                xp[i] = x[i] + eps;
                xm[i] = x[i] - eps;
                let fp = self.eval_f(t, &xp)?;
                let fm = self.eval_f(t, &xm)?;
                for r in 0..self.dim {
                    jac.set(r, i, (fp[r] - fm[r]) / (2.0 * eps));
                }
                xp[i] = x[i];
                xm[i] = x[i];
            }
        }
        if !jac.all_finite() {
            return Err(Error::NonFiniteField {
                t,
                state: x.to_vec(),
            });
        }
        Ok(jac)
    }

    /// Time derivative of the field: zero for autonomous problems,
    /// analytic when supplied, else a forward difference in `t`.
    pub fn eval_f_t(&self, t: f64, x: &[f64]) -> Result<Vec<f64>, Error> {
        if self.autonomous {
            return Ok(vec![0.0; self.dim]);
        }
        if let Some(ft) = &self.f_t {
            let mut out = vec![0.0; self.dim];
            ft(t, x, &mut out);
            if out.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteField {
                    t,
                    state: x.to_vec(),
                });
            }
            Ok(out)
        } else {
            let eps = f64::EPSILON.sqrt() * t.abs().max(1.0);
            let f0 = self.eval_f(t, x)?;
            let f1 = self.eval_f(t + eps, x)?;
            Ok(f0.iter().zip(&f1).map(|(a, b)| (b - a) / eps).collect())
        }
    }

    /// Builds the augmented matrix from already evaluated parts.
    ///
    /// Autonomous: `[[J, f], [0, 0]]`. Non-autonomous:
    /// `[[J, f_t, f], [0, 0, 1], [0, 0, 0]]`.
    pub fn augmented_from_parts(
        &self,
        jac: &DenseMatrix,
        f_val: &[f64],
        f_t_val: Option<&[f64]>,
    ) -> DenseMatrix {
        let d = self.dim;
        let n = self.augmented_dim();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, jac.get(i, j));
            }
            m.set(i, n - 1, f_val[i]);
        }
        if !self.autonomous {
            let ft = f_t_val.expect("non-autonomous augmented matrix needs f_t");
            for i in 0..d {
                m.set(i, d, ft[i]);
            }
            m.set(d, n - 1, 1.0);
        }
        m
    }

    /// Evaluates everything and assembles the augmented matrix.
    pub fn build_augmented(&self, t: f64, y: &[f64]) -> Result<DenseMatrix, Error> {
        let f_val = self.eval_f(t, y)?;
        let jac = self.eval_jacobian(t, y)?;
        let ft = if self.autonomous {
            None
        } else {
            Some(self.eval_f_t(t, y)?)
        };
        Ok(self.augmented_from_parts(&jac, &f_val, ft.as_deref()))
    }
}

/// First `d` entries of the last column of `m`: the selector product
/// `L m r` that reads the linearized increment out of an augmented
/// exponential.
pub fn extract_u(m: &DenseMatrix, d: usize) -> Result<Vec<f64>, Error> {
    if !m.is_square() || m.rows() < d + 1 {
        return Err(Error::usage(
            "augmented matrix must be square with size at least d+1",
        ));
    }
    let last = m.cols() - 1;
    Ok((0..d).map(|i| m.get(i, last)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matexp::{expm, PadeOrder};

    fn brusselator() -> OdeProblem {
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

    #[test]
    fn brusselator_field_value() {
        let p = brusselator();
        let f = p.eval_f(0.0, &[1.5, 3.0]).unwrap();
        assert!((f[0] - 1.75).abs() < 1e-14);
        assert!((f[1] - (-2.25)).abs() < 1e-14);
    }

    #[test]
    fn brusselator_jacobian_analytic_and_fd_agree() {
        let p = brusselator();
        let j = p.eval_jacobian(0.0, &[1.0, 1.0]).unwrap();
        assert!((j.get(0, 0) - (-2.0)).abs() < 1e-14);
        assert!((j.get(0, 1) - 1.0).abs() < 1e-14);
        assert!((j.get(1, 0) - 1.0).abs() < 1e-14);
        assert!((j.get(1, 1) - (-1.0)).abs() < 1e-14);

        // finite-difference fallback on a copy without the analytic Jacobian
        let p_fd = OdeProblem::new(
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
        .unwrap();
        let j_fd = p_fd.eval_jacobian(0.0, &[1.0, 1.0]).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                assert!((j_fd.get(i, k) - j.get(i, k)).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn linear_field_equilibrium() {
        // f(x) = A (x + c) vanishes at x = -c
        let p = OdeProblem::new(
            2,
            true,
            0.0,
            1.0,
            vec![0.0, 0.0],
            Box::new(|_t, x, out| {
                out[0] = 2.0 * (x[0] + 1.0) - (x[1] - 0.5);
                out[1] = (x[0] + 1.0) + 3.0 * (x[1] - 0.5);
            }),
        )
        .unwrap();
        let f = p.eval_f(0.0, &[-1.0, 0.5]).unwrap();
        assert_eq!(f, vec![0.0, 0.0]);
    }

    #[test]
    fn augmented_block_pattern_autonomous() {
        let p = OdeProblem::new(
            1,
            true,
            0.0,
            1.0,
            vec![0.0],
            Box::new(|_t, _x, out| out[0] = 3.0),
        )
        .unwrap()
        .with_jacobian(Box::new(|_t, _x, jac| jac.set(0, 0, -2.0)));
        let m = p.build_augmented(0.0, &[0.0]).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.get(0, 0), -2.0);
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 0.0);
        assert_eq!(m.get(1, 1), 0.0);
    }

    #[test]
    fn augmented_block_pattern_non_autonomous() {
        let p = OdeProblem::new(
            1,
            false,
            0.0,
            1.0,
            vec![0.0],
            Box::new(|t, _x, out| out[0] = 1.0 + t),
        )
        .unwrap();
        let m = p.build_augmented(0.0, &[0.0]).unwrap();
        assert_eq!(m.rows(), 3);
        // middle row (0, 0, 1), bottom row all zero, bit-exact
        assert_eq!(m.get(1, 0), 0.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.get(1, 2), 1.0);
        for j in 0..3 {
            assert_eq!(m.get(2, j), 0.0);
        }
    }

    #[test]
    fn augmented_dimension_scaling() {
        let p = OdeProblem::new(
            12,
            true,
            0.0,
            1.0,
            vec![0.0; 12],
            Box::new(|_t, _x, out| out.fill(0.0)),
        )
        .unwrap();
        assert_eq!(p.augmented_dim(), 13);
        let m = p.build_augmented(0.0, &[0.0; 12]).unwrap();
        assert_eq!(m.rows(), 13);
    }

    #[test]
    fn extract_u_of_identity_is_zero() {
        let m = DenseMatrix::identity(4);
        assert_eq!(extract_u(&m, 3).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn extract_u_nilpotent_and_polynomial_cases() {
        // autonomous, f_x = 0, f = v: u(h) = v h
        let v = 1.3;
        let h = 0.4;
        let d = DenseMatrix::from_rows(&[vec![0.0, v], vec![0.0, 0.0]]).unwrap();
        let (m, _) = expm(&d, h, PadeOrder::default()).unwrap();
        let u = extract_u(&m, 1).unwrap();
        assert!((u[0] - v * h).abs() <= 1e-14);

        // non-autonomous, f_x = 0, f_t = g, f = v: u(h) = v h + g h^2 / 2
        let g = -0.8;
        let d =
            DenseMatrix::from_rows(&[vec![0.0, g, v], vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0]])
                .unwrap();
        let (m, _) = expm(&d, h, PadeOrder::default()).unwrap();
        let u = extract_u(&m, 1).unwrap();
        assert!((u[0] - (v * h + g * h * h / 2.0)).abs() <= 1e-14);
    }

    #[test]
    fn non_finite_field_is_reported_with_location() {
        let p = OdeProblem::new(
            1,
            true,
            0.0,
            1.0,
            vec![1.0],
            Box::new(|_t, x, out| out[0] = 1.0 / (x[0] - 1.0)),
        )
        .unwrap();
        match p.eval_f(0.5, &[1.0]) {
            Err(Error::NonFiniteField { t, state }) => {
                assert_eq!(t, 0.5);
                assert_eq!(state, vec![1.0]);
            }
            other => panic!("expected non-finite field error, got {other:?}"),
        }
    }
}
