//! Rényi-DP conversion of the prior trade-off-function guarantee.
//!
//! The prior bound relaxes to the piecewise trade-off
//! f(t) = max(Phi(Phi^{-1}(1-t) - Delta), 1 - t - 2 C_{n,k,d}) with
//! C_{n,k,d} = C' k sqrt(n_syn / (d - k)). Its Rényi conversion has a closed
//! form in terms of the intersection points z_+- of
//! Phi(z) - Phi(z - Delta) = 2 C_{n,k,d}.

use crate::accountant::bounds::rdp_gaussian;
use crate::error::{Error, Result};
use crate::mathkit::{bisect, std_normal_cdf};
use serde::{Deserialize, Serialize};

/// Inputs of the prior-work comparison. `c_prime` is the absolute constant
/// of the prior bound. It defaults to 1, but the constant is exposed
/// because no value is pinned analytically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorWorkParams {
    pub c_prime: f64,
    pub n_syn: u64,
    pub d: u32,
    pub k: u32,
    pub delta_sens: f64,
    pub alpha: f64,
}

impl PriorWorkParams {
    pub fn new(
        c_prime: f64,
        n_syn: u64,
        d: u32,
        k: u32,
        delta_sens: f64,
        alpha: f64,
    ) -> Result<Self> {
        if !(c_prime > 0.0) {
            return Err(Error::domain(format!(
                "PriorWorkParams: C' = {c_prime} must be > 0"
            )));
        }
        if n_syn == 0 {
            return Err(Error::domain(
                "PriorWorkParams: n_syn must be >= 1".to_string(),
            ));
        }
        if d <= k {
            return Err(Error::domain(format!(
                "PriorWorkParams: the bound uses sqrt(n/(d-k)), need d > k, got d={d}, k={k}"
            )));
        }
        if !(delta_sens >= 0.0) {
            return Err(Error::domain(format!(
                "PriorWorkParams: Delta = {delta_sens} must be >= 0"
            )));
        }
        if !(alpha > 1.0) {
            return Err(Error::domain(format!(
                "PriorWorkParams: alpha = {alpha} must be > 1"
            )));
        }
        let p = Self {
            c_prime,
            n_syn,
            d,
            k,
            delta_sens,
            alpha,
        };
        let shift = p.trade_off_shift();
        if !(shift > 0.0 && shift < 0.5) {
            return Err(Error::domain(format!(
                "PriorWorkParams: C_(n,k,d) = {shift} must lie in (0, 1/2) for a meaningful trade-off shift"
            )));
        }
        Ok(p)
    }

    /// C_{n,k,d} = C' k sqrt(n_syn / (d - k)).
    pub fn trade_off_shift(&self) -> f64 {
        self.c_prime * self.k as f64 * (self.n_syn as f64 / (self.d - self.k) as f64).sqrt()
    }
}

/// Result of the prior-work Rényi conversion. The intersection points are
/// absent in the non-amplified fallback branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorRdp {
    pub l_alpha: f64,
    pub z_plus: Option<f64>,
    pub z_minus: Option<f64>,
}

/// The no-amplification threshold: the prior bound yields no amplification
/// iff Delta < 2 C' k sqrt(2 pi n_syn / (d - k)). Returns the threshold and
/// whether the inputs land in the amplified regime.
pub fn no_amplification_threshold(p: &PriorWorkParams) -> (f64, bool) {
    let threshold = 2.0 * p.trade_off_shift() * (2.0 * std::f64::consts::PI).sqrt();
    (threshold, p.delta_sens >= threshold)
}

/// Closed-form Rényi conversion of the prior trade-off bound.
///
/// In the amplified regime, z_+ solves Phi(z) - Phi(z - Delta) = 2 C_{n,k,d}
/// on [Delta/2, Delta/2 + 10] (the equation's two roots satisfy
/// z_+ + z_- = Delta), and
/// exp((alpha-1) l_alpha) = e^{alpha (alpha-1) Delta^2 / 2} A + L with
/// A = Phi(z_- + (alpha-1) Delta) + Phi(-(z_+ + (alpha-1) Delta)) and
/// L = Phi(z_+) - Phi(z_-). Outside that regime the conversion collapses to
/// the Gaussian baseline alpha Delta^2 / 2.
pub fn rdp_conversion(p: &PriorWorkParams, tol: f64) -> Result<PriorRdp> {
    let (_, amplified) = no_amplification_threshold(p);
    if !amplified {
        return Ok(PriorRdp {
            l_alpha: rdp_gaussian(p.alpha, p.delta_sens),
            z_plus: None,
            z_minus: None,
        });
    }
    let shift = p.trade_off_shift();
    let delta = p.delta_sens;
    let gap = move |z: f64| std_normal_cdf(z) - std_normal_cdf(z - delta) - 2.0 * shift;
    let z_plus = bisect(gap, 0.5 * delta, 0.5 * delta + 10.0, tol)?;
    let z_minus = delta - z_plus;

    let alpha = p.alpha;
    let a_term = std_normal_cdf(z_minus + (alpha - 1.0) * delta)
        + std_normal_cdf(-(z_plus + (alpha - 1.0) * delta));
    let l_term = std_normal_cdf(z_plus) - std_normal_cdf(z_minus);
    let log_gauss_piece = 0.5 * alpha * (alpha - 1.0) * delta * delta + a_term.ln();
    let l_alpha = log_sum_exp(log_gauss_piece, l_term.ln()) / (alpha - 1.0);
    Ok(PriorRdp {
        l_alpha,
        z_plus: Some(z_plus),
        z_minus: Some(z_minus),
    })
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}
