//! Matrix exponentials by (p,q) Padé approximation with scaling and
//! squaring (Moler & Van Loan), and the product chain that produces the
//! exponential at every Dormand-Prince abscissa from a single base
//! approximant.

use crate::error::Error;
use crate::matrix::DenseMatrix;

/// Order of the rational approximant to the exponential.
///
/// `p + q > 4` keeps the locally linearized pair at full order; the
/// approximant is A-acceptable when `p <= q <= p + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadeOrder {
    p: u32,
    q: u32,
}

impl PadeOrder {
    pub fn new(p: u32, q: u32) -> Result<Self, Error> {
        if p + q <= 4 {
            return Err(Error::usage(format!(
                "Pade order ({p},{q}) too low: p + q must exceed 4"
            )));
        }
        Ok(PadeOrder { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_a_acceptable(&self) -> bool {
        self.p <= self.q && self.q <= self.p + 2
    }
}

impl Default for PadeOrder {
    /// The diagonal (3,3) approximant.
    fn default() -> Self {
        PadeOrder { p: 3, q: 3 }
    }
}

/// Numerator coefficients of the (p,q) approximant:
/// `n_j = (p+q-j)! p! / ((p+q)! j! (p-j)!)`.
/// Swapping `p` and `q` gives the denominator coefficients, applied to `-A`.
fn pade_coefficients(p: u32, q: u32) -> Vec<f64> {
    let mut coeffs = Vec::with_capacity(p as usize + 1);
    let mut c = 1.0f64;
    coeffs.push(c);
    for j in 1..=p {
        c *= (p - j + 1) as f64 / ((j * (p + q - j + 1)) as f64);
        coeffs.push(c);
    }
    coeffs
}

/// Raw (p,q) rational approximant `N(a) D(a)^{-1}` to `e^a`.
///
/// The caller is expected to have scaled `a` so that its infinity norm is
/// at most 1/2; within that range the denominator is well conditioned. A
/// singular denominator is reported, never divided through.
pub fn pade_expm_core(a: &DenseMatrix, order: PadeOrder) -> Result<DenseMatrix, Error> {
    if !a.is_square() {
        return Err(Error::usage("matrix exponential requires a square matrix"));
    }
    let n = a.rows();
    let num_c = pade_coefficients(order.p, order.q);
    let den_c = pade_coefficients(order.q, order.p);

    let mut numer = DenseMatrix::identity(n).scaled(num_c[0]);
    let mut denom = DenseMatrix::identity(n).scaled(den_c[0]);
    let mut power = DenseMatrix::identity(n);
    let top = order.p.max(order.q);
    for j in 1..=top {
        power = power.mat_mul(a)?;
        if j <= order.p {
            numer.add_assign_scaled(&power, num_c[j as usize])?;
        }
        if j <= order.q {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            denom.add_assign_scaled(&power, sign * den_c[j as usize])?;
        }
    }
    denom.solve(&numer)
}

/// Approximates `e^{a h}` with scaling and squaring.
///
/// Returns the exponential together with `kappa`, the smallest
/// nonnegative integer such that `inf_norm(2^-kappa * a * h) <= 1/2`.
pub fn expm(a: &DenseMatrix, h: f64, order: PadeOrder) -> Result<(DenseMatrix, u32), Error> {
    if !a.is_square() {
        return Err(Error::usage("matrix exponential requires a square matrix"));
    }
    if !h.is_finite() {
        return Err(Error::usage("step must be finite"));
    }
    let ah = a.scaled(h);
    let norm = ah.inf_norm();
    if !norm.is_finite() {
        return Err(Error::Overflow);
    }
    let kappa = scaling_exponent(norm);
    let scaled = ah.scaled(0.5f64.powi(kappa as i32));
    let mut result = pade_expm_core(&scaled, order)?;
    for _ in 0..kappa {
        result = result.mat_mul(&result)?;
    }
    if !result.all_finite() {
        return Err(Error::Overflow);
    }
    Ok((result, kappa))
}

/// Smallest `kappa >= 0` with `norm / 2^kappa <= 1/2`.
fn scaling_exponent(norm: f64) -> u32 {
    let mut kappa = 0u32;
    let mut n = norm;
    while n > 0.5 {
        n /= 2.0;
        kappa += 1;
    }
    kappa
}

/// Exponentials of `d * c * h` at the stage fractions, all derived from a
/// single Padé evaluation of `e^{d h / 90}`.
///
/// The ladder is a fixed product schedule: doubling from 1/90 up to
/// 32/90, then `80/90 = 32/90 + 16/90 + 32/90`, `1/10 = 8/90 + 1/90`,
/// `1/5 = (1/10)^2`, `2/5 = (1/5)^2`, `4/5 = (2/5)^2`,
/// `3/10 = 1/10 * 1/5` and `1 = 4/5 * 1/5`. Every retained matrix is an
/// exact floating-point product of the retained factors, so the semigroup
/// identities hold bit-for-bit.
#[derive(Clone, Debug)]
pub struct ExpChain {
    /// Scaling exponent used for the base exponential of `d h / 90`.
    pub kappa: u32,
    pub m_ninetieth: DenseMatrix,
    pub m_tenth: DenseMatrix,
    pub m_fifth: DenseMatrix,
    pub m_three_tenths: DenseMatrix,
    pub m_two_fifths: DenseMatrix,
    pub m_four_fifths: DenseMatrix,
    pub m_eight_ninths: DenseMatrix,
    pub m_one: DenseMatrix,
}

pub fn exp_chain(d: &DenseMatrix, h: f64, order: PadeOrder) -> Result<ExpChain, Error> {
    let (m_1_90, kappa) = expm(d, h / 90.0, order)?;
    let m_2_90 = m_1_90.mat_mul(&m_1_90)?;
    let m_4_90 = m_2_90.mat_mul(&m_2_90)?;
    let m_8_90 = m_4_90.mat_mul(&m_4_90)?;
    let m_16_90 = m_8_90.mat_mul(&m_8_90)?;
    let m_32_90 = m_16_90.mat_mul(&m_16_90)?;
    let m_80_90 = m_32_90.mat_mul(&m_16_90)?.mat_mul(&m_32_90)?;
    let m_tenth = m_8_90.mat_mul(&m_1_90)?;
    let m_fifth = m_tenth.mat_mul(&m_tenth)?;
    let m_two_fifths = m_fifth.mat_mul(&m_fifth)?;
    let m_four_fifths = m_two_fifths.mat_mul(&m_two_fifths)?;
    let m_three_tenths = m_tenth.mat_mul(&m_fifth)?;
    let m_one = m_four_fifths.mat_mul(&m_fifth)?;

    let chain = ExpChain {
        kappa,
        m_ninetieth: m_1_90,
        m_tenth,
        m_fifth,
        m_three_tenths,
        m_two_fifths,
        m_four_fifths,
        m_eight_ninths: m_80_90,
        m_one,
    };
    for m in [
        &chain.m_tenth,
        &chain.m_fifth,
        &chain.m_three_tenths,
        &chain.m_two_fifths,
        &chain.m_four_fifths,
        &chain.m_eight_ninths,
        &chain.m_one,
    ] {
        if !m.all_finite() {
            return Err(Error::Overflow);
        }
    }
    Ok(chain)
}
