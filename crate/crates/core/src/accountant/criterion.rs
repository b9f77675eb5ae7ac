use crate::error::{Error, Result};
use crate::mathkit::adaptive_quadrature;

/// Fisher-to-Rényi criterion integrator.
///
/// Given a uniform Fisher-information bound `fisher_sup` on the parameter
/// segment and an envelope U(z, theta) dominating the order-(2 alpha - 1)
/// divergence along it, returns
/// (1/(alpha-1)) log(1 + alpha sqrt(fisher_sup) D) with
/// D = int_theta^theta' exp((alpha-1) U(z, theta)) dz by adaptive quadrature.
pub fn criterion_bound(
    alpha: f64,
    fisher_sup: f64,
    envelope: impl Fn(f64, f64) -> f64,
    theta: f64,
    theta_prime: f64,
    tol: f64,
) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::domain(format!(
            "criterion_bound: alpha = {alpha} must be > 1"
        )));
    }
    if !(fisher_sup >= 0.0) {
        return Err(Error::domain(format!(
            "criterion_bound: fisher_sup = {fisher_sup} must be >= 0"
        )));
    }
    if !(theta < theta_prime) {
        return Err(Error::domain(format!(
            "criterion_bound: need theta < theta_prime, got {theta} >= {theta_prime}"
        )));
    }
    if fisher_sup == 0.0 {
        return Ok(0.0);
    }
    let integrand = |z: f64| ((alpha - 1.0) * envelope(z, theta)).exp();
    // The envelope integrand is >= 1 and can be exponentially large, so the
    // absolute tolerance is scaled by a coarse magnitude probe.
    let width = theta_prime - theta;
    let probe = integrand(theta)
        .max(integrand(theta + 0.5 * width))
        .max(integrand(theta_prime))
        * width;
    if !probe.is_finite() {
        return Err(Error::domain(
            "criterion_bound: envelope integrand overflows on the segment".to_string(),
        ));
    }
    let d_int = adaptive_quadrature(integrand, theta, theta_prime, tol * probe.max(1.0))?;
    Ok((alpha * fisher_sup.sqrt() * d_int.value).ln_1p() / (alpha - 1.0))
}
