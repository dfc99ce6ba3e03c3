//! The relative-error metric shared by all simulations.

use crate::error::BenchError;

/// Denominator guard: reference components smaller than this are
/// excluded from the maximum.
pub const RE_DENOMINATOR_GUARD: f64 = 1e-12;

/// Max over sample times and components of `|x - y| / |x|`, where `x`
/// is the reference and `y` the approximation. Components with
/// `|x| < 1e-12` are skipped. Any non-finite quotient yields infinity.
pub fn relative_error(reference: &[Vec<f64>], approx: &[Vec<f64>]) -> Result<f64, BenchError> {
    if reference.is_empty() || approx.is_empty() {
        return Err(BenchError::usage(
            "relative error needs at least one sample",
        ));
    }
    if reference.len() != approx.len() {
        return Err(BenchError::usage(format!(
            "sample count mismatch: {} reference vs {} approximation",
            reference.len(),
            approx.len()
        )));
    }
    let mut worst = 0.0f64;
    for (x, y) in reference.iter().zip(approx) {
        if x.len() != y.len() {
            return Err(BenchError::usage("sample dimension mismatch"));
        }
        for (xi, yi) in x.iter().zip(y) {
            if xi.abs() < RE_DENOMINATOR_GUARD {
                continue;
            }
            let q = ((xi - yi) / xi).abs();
            if !q.is_finite() {
                return Ok(f64::INFINITY);
            }
            worst = worst.max(q);
        }
    }
    Ok(worst)
}
