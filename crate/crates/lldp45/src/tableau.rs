//! The Dormand-Prince 5(4) coefficients and the quartic weight
//! polynomials of its continuous extension (Dormand & Prince 1980;
//! Hairer, Nørsett & Wanner).

/// Embedded 7-stage tableau with dense-output polynomial coefficients.
///
/// `a` is lower triangular, `b` are the 5th-order weights, `b_hat` the
/// 4th-order weights and `c` the abscissae. Row 7 of `a` equals `b`
/// (FSAL: the last stage evaluates the field at the accepted endpoint).
/// `alpha[j]` holds the coefficients of the dense-output weight
/// polynomial `b_j(theta) = sum_i alpha[j][i-1] * theta^i`; each row sums
/// to `b_j`, so the interpolant collapses to the 5th-order result at
/// `theta = 1`.
#[derive(Debug)]
pub struct EmbeddedTableau {
    pub s: usize,
    pub a: [[f64; 7]; 7],
    pub b: [f64; 7],
    pub b_hat: [f64; 7],
    pub c: [f64; 7],
    pub alpha: [[f64; 4]; 7],
}

static DP45: EmbeddedTableau = EmbeddedTableau {
    s: 7,
    a: [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
            0.0,
        ],
    ],
    b: [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ],
    b_hat: [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ],
    c: [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0],
    alpha: [
        [1.0, -183.0 / 64.0, 37.0 / 12.0, -145.0 / 128.0],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 1500.0 / 371.0, -1000.0 / 159.0, 1000.0 / 371.0],
        [0.0, -125.0 / 32.0, 125.0 / 12.0, -375.0 / 64.0],
        [0.0, 9477.0 / 3392.0, -729.0 / 106.0, 25515.0 / 6784.0],
        [0.0, -11.0 / 7.0, 11.0 / 3.0, -55.0 / 28.0],
        [0.0, 3.0 / 2.0, -4.0, 5.0 / 2.0],
    ],
};

pub fn dp45_tableau() -> &'static EmbeddedTableau {
    &DP45
}

impl EmbeddedTableau {
    /// Dense-output weight `b_j(theta)`, evaluated by Horner's rule.
    #[inline]
    pub fn dense_weight(&self, j: usize, theta: f64) -> f64 {
        let a = &self.alpha[j];
        theta * (a[0] + theta * (a[1] + theta * (a[2] + theta * a[3])))
    }
}
