use crate::distributions::{chi2_log_pdf, NoncentralChiSq};
use crate::error::{Error, Result};
use crate::mathkit::log_integrate_to_inf;

/// Log-density of the k = 1 release statistic S = |ZV|^2 at s > 0.
///
/// Conditionally on Y = |V|^2, the statistic is Y times a central
/// chi-squared with n_syn degrees of freedom, so the density is the product
/// mixture integral p_S(s) = int p_Y(y) f_n(s/y) / y dy. Substituting
/// u = s/y turns this into int p_Y(s/u) f_n(u) / u du, whose inner factor
/// f_n concentrates near u = n_syn independently of s; that point is used as
/// the quadrature mode hint. The integrand is evaluated in log space because
/// it spans hundreds of orders of magnitude across the outer s range.
///
/// The k = 1 sufficiency reduction behind this formula holds for every
/// n_syn >= 1, not only n_syn >= d: with k = 1 the conditional law of ZV
/// given V depends on V only through |V|^2, so the factorization argument
/// for the Gram statistic applies verbatim.
pub fn finite_n_log_pdf_k1(d: u32, n_syn: u64, theta: f64, s: f64, tol: f64) -> Result<f64> {
    if n_syn == 0 {
        return Err(Error::domain(
            "finite_n_pdf_k1: n_syn must be >= 1".to_string(),
        ));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!(
            "finite_n_pdf_k1: s = {s} must be finite and > 0"
        )));
    }
    let y_dist = NoncentralChiSq::new(d, theta)?;
    let log_integrand = move |u: f64| {
        if u <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let y = s / u;
        if !y.is_finite() || y <= 0.0 {
            return f64::NEG_INFINITY;
        }
        match y_dist.log_pdf(y) {
            Ok(ly) => ly + chi2_log_pdf(n_syn, u) - u.ln(),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    // Stationary point of -s/(2u) + (n/2-1) ln u - u/2: the integrand peak
    // sits near u = n for typical s and drifts like sqrt(s) far in the tail.
    let n = n_syn as f64;
    let mode = 0.5 * ((n - 2.0) + ((n - 2.0) * (n - 2.0) + 4.0 * s).sqrt());
    log_integrate_to_inf(log_integrand, 0.0, tol, Some(mode.max(1.0)))
}

/// Density value for [`finite_n_log_pdf_k1`].
pub fn finite_n_pdf_k1(d: u32, n_syn: u64, theta: f64, s: f64, tol: f64) -> Result<f64> {
    Ok(finite_n_log_pdf_k1(d, n_syn, theta, s, tol)?.exp())
}
