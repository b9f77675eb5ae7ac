use crate::error::{Error, Result};

/// Bisection on [lo, hi] down to bracket width `tol`.
///
/// Requires a sign change (a zero endpoint counts); returns the bracket
/// midpoint once the bracket is narrower than `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::domain(format!(
            "bisect: need lo < hi and tol > 0, got [{lo}, {hi}], tol {tol}"
        )));
    }
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f_lo;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
