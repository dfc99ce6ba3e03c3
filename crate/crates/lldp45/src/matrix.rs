//! Small dense row-major matrices.
//!
//! This is the only linear-algebra carrier in the crate: it holds
//! Jacobians, augmented linearization matrices and their exponentials.
//! The systems involved are tiny (a handful of rows), so the kernels are
//! straightforward loops and an LU solve with partial pivoting.

use crate::error::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, Error> {
        if rows == 0 || cols == 0 {
            return Err(Error::usage("matrix dimensions must be at least 1x1"));
        }
        if data.len() != rows * cols {
            return Err(Error::usage(format!(
                "matrix data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, Error> {
        if rows.is_empty() {
            return Err(Error::usage("matrix needs at least one row"));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::usage("ragged rows"));
        }
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        DenseMatrix::new(rows.len(), cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        let mut norm = 0.0f64;
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let s: f64 = row.iter().map(|v| v.abs()).sum();
            norm = norm.max(s);
        }
        norm
    }

    pub fn scaled(&self, s: f64) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `self += s * other`, shapes must match.
    pub fn add_assign_scaled(&mut self, other: &DenseMatrix, s: f64) -> Result<(), Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::usage("shape mismatch in matrix addition"));
        }
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += s * b;
        }
        Ok(())
    }

    /// Matrix product. Accumulates row-by-row over `self`'s columns.
    pub fn mat_mul(&self, other: &DenseMatrix) -> Result<DenseMatrix, Error> {
        if self.cols != other.rows {
            return Err(Error::usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = DenseMatrix::zeros(n, m);
        for i in 0..n {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[l * m..(l + 1) * m];
                let orow = &mut out.data[i * m..(i + 1) * m];
                for j in 0..m {
                    orow[j] += a * brow[j];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mat_vec(&self, v: &[f64]) -> Result<Vec<f64>, Error> {
        if v.len() != self.cols {
            return Err(Error::usage("vector length does not match matrix columns"));
        }
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            out[i] = row.iter().zip(v).map(|(a, x)| a * x).sum();
        }
        Ok(out)
    }

    /// Solves `self * X = rhs` by LU factorization with partial pivoting.
    ///
    /// A pivot smaller than `n * eps * inf_norm(self)` is reported as
    /// `Error::Singular` rather than divided through.
    pub fn solve(&self, rhs: &DenseMatrix) -> Result<DenseMatrix, Error> {
        if !self.is_square() {
            return Err(Error::usage("solve requires a square matrix"));
        }
        if rhs.rows != self.rows {
            return Err(Error::usage("right-hand side row count mismatch"));
        }
        let n = self.rows;
        let m = rhs.cols;
        let mut lu = self.data.clone();
        let mut x = rhs.data.clone();
        let pivot_floor = (n as f64) * f64::EPSILON * self.inf_norm();

        for col in 0..n {
            // pivot search
            let mut piv = col;
            let mut piv_val = lu[col * n + col].abs();
            for r in (col + 1)..n {
                let v = lu[r * n + col].abs();
                if v > piv_val {
                    piv = r;
                    piv_val = v;
                }
            }
            if !(piv_val > pivot_floor) || !piv_val.is_finite() {
                return Err(Error::Singular);
            }
            if piv != col {
                for j in 0..n {
                    lu.swap(col * n + j, piv * n + j);
                }
                for j in 0..m {
                    x.swap(col * m + j, piv * m + j);
                }
            }
            let d = lu[col * n + col];
            for r in (col + 1)..n {
                let factor = lu[r * n + col] / d;
                if factor == 0.0 {
                    continue;
                }
                lu[r * n + col] = 0.0;
                for j in (col + 1)..n {
                    lu[r * n + j] -= factor * lu[col * n + j];
                }
                for j in 0..m {
                    x[r * m + j] -= factor * x[col * m + j];
                }
            }
        }
        // back substitution
        for col in (0..n).rev() {
            let d = lu[col * n + col];
            for j in 0..m {
                let mut s = x[col * m + j];
                for l in (col + 1)..n {
                    s -= lu[col * n + l] * x[l * m + j];
                }
                x[col * m + j] = s / d;
            }
        }
        DenseMatrix::new(n, m, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent triple-loop product in the classic i-j-k order.
    fn naive_mul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut s = 0.0;
                for k in 0..a.cols() {
                    s += a.get(i, k) * b.get(k, j);
                }
                out.set(i, j, s);
            }
        }
        out
    }

    #[test]
    fn identity_is_neutral() {
        let x = DenseMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![4.0, 5.0, 6.0],
            vec![7.0, 8.0, 9.0],
        ])
        .unwrap();
        let i3 = DenseMatrix::identity(3);
        assert_eq!(i3.mat_mul(&x).unwrap(), x);
        assert_eq!(x.mat_mul(&i3).unwrap(), x);
    }

    #[test]
    fn zero_annihilates() {
        let x = DenseMatrix::from_rows(&[vec![1.0, -2.0], vec![3.0, 4.0]]).unwrap();
        let z = DenseMatrix::zeros(2, 2);
        assert_eq!(x.mat_mul(&z).unwrap(), z);
    }

    #[test]
    fn product_matches_naive_oracle() {
        // fixed pseudo-random 4x4 pair
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let a = DenseMatrix::new(4, 4, (0..16).map(|_| next()).collect()).unwrap();
        let b = DenseMatrix::new(4, 4, (0..16).map(|_| next()).collect()).unwrap();
        let fast = a.mat_mul(&b).unwrap();
        let slow = naive_mul(&a, &b);
        for (x, y) in fast.data().iter().zip(slow.data()) {
            assert!((x - y).abs() <= 1e-15 * y.abs().max(1.0));
        }
    }

    #[test]
    fn inf_norm_values() {
        assert_eq!(DenseMatrix::zeros(3, 3).inf_norm(), 0.0);
        assert_eq!(DenseMatrix::identity(5).inf_norm(), 1.0);
        let m = DenseMatrix::from_rows(&[vec![1.0, -2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.inf_norm(), 7.0);
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = DenseMatrix::from_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 4.0],
        ])
        .unwrap();
        let x_true = DenseMatrix::from_rows(&[vec![1.0], vec![-2.0], vec![0.5]]).unwrap();
        let b = a.mat_mul(&x_true).unwrap();
        let x = a.solve(&b).unwrap();
        for (u, v) in x.data().iter().zip(x_true.data()) {
            assert!((u - v).abs() < 1e-13);
        }
    }

    #[test]
    fn solve_rejects_singular() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let b = DenseMatrix::identity(2);
        assert_eq!(a.solve(&b), Err(Error::Singular));
    }

    #[test]
    fn dimension_mismatch_is_usage_error() {
        let a = DenseMatrix::zeros(2, 3);
        let b = DenseMatrix::zeros(2, 3);
        assert!(matches!(a.mat_mul(&b), Err(Error::Usage(_))));
    }
}
