use crate::distributions::{finite_n_log_pdf_k1, NoncentralChiSq};
use crate::error::{Error, Result};
use crate::mathkit::log_integrate_to_inf;

/// Exact Rényi divergence D_alpha(chi^2_d(theta_v^2), chi^2_d(theta_w^2)) by
/// log-space quadrature of p_v^alpha p_w^{1-alpha} over (0, inf).
///
/// This is the n_syn -> infinity plateau of the release divergence for
/// k = 1: the privacy loss of handing out the Gram statistic itself.
pub fn renyi_ncx2_quadrature(
    alpha: f64,
    d: u32,
    theta_v: f64,
    theta_w: f64,
    tol: f64,
) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::domain(format!(
            "renyi_ncx2_quadrature: alpha = {alpha} must be > 1"
        )));
    }
    let p_v = NoncentralChiSq::new(d, theta_v)?;
    let p_w = NoncentralChiSq::new(d, theta_w)?;
    if theta_v == theta_w {
        return Ok(0.0);
    }
    let log_integrand = move |x: f64| {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        match (p_v.log_pdf(x), p_w.log_pdf(x)) {
            (Ok(lv), Ok(lw)) => alpha * lv + (1.0 - alpha) * lw,
            _ => f64::NEG_INFINITY,
        }
    };
    // The alpha-tilted integrand peaks past the p_v mean when theta_v is the
    // larger amplitude; overshooting the hint only widens the resolved head.
    let hint = d as f64 + alpha * theta_v.max(theta_w).powi(2) + 1.0;
    let log_h = log_integrate_to_inf(log_integrand, 0.0, tol, Some(hint))?;
    Ok(log_h / (alpha - 1.0))
}

/// Exact finite-release Rényi divergence D_alpha(|ZV|^2, |ZW|^2) for k = 1
/// through the product-mixture density.
///
/// The outer integral runs at `tol` and each density evaluation runs its
/// inner mixture integral two orders tighter, which keeps the nested error
/// below the outer tolerance.
pub fn renyi_finite_n_k1(
    alpha: f64,
    d: u32,
    n_syn: u64,
    theta_v: f64,
    theta_w: f64,
    tol: f64,
) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::domain(format!(
            "renyi_finite_n_k1: alpha = {alpha} must be > 1"
        )));
    }
    NoncentralChiSq::new(d, theta_v)?;
    NoncentralChiSq::new(d, theta_w)?;
    if n_syn == 0 {
        return Err(Error::domain(
            "renyi_finite_n_k1: n_syn must be >= 1".to_string(),
        ));
    }
    if theta_v == theta_w {
        return Ok(0.0);
    }
    let inner_tol = 0.01 * tol;
    let log_integrand = move |s: f64| {
        if s <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let lv = finite_n_log_pdf_k1(d, n_syn, theta_v, s, inner_tol);
        let lw = finite_n_log_pdf_k1(d, n_syn, theta_w, s, inner_tol);
        match (lv, lw) {
            (Ok(lv), Ok(lw)) => alpha * lv + (1.0 - alpha) * lw,
            _ => f64::NEG_INFINITY,
        }
    };
    let hint = n_syn as f64 * (d as f64 + alpha * theta_v.max(theta_w).powi(2) + 1.0);
    let log_h = log_integrate_to_inf(log_integrand, 0.0, tol, Some(hint))?;
    Ok(log_h / (alpha - 1.0))
}
