use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Number of released synthetic records, possibly unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NSyn {
    Finite(u64),
    Infinite,
}

impl std::fmt::Display for NSyn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NSyn::Finite(n) => write!(f, "{n}"),
            NSyn::Infinite => write!(f, "inf"),
        }
    }
}

/// The tuple that indexes every bound: Rényi order, sensitivity, parameter
/// norm cap, model width, record dimension and release size.
///
/// The noise scales are normalized to sigma = sigma_z = 1; callers with a
/// different sigma rescale `delta_sens` and `c_bound` by 1/sigma first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyParams {
    pub alpha: f64,
    pub delta_sens: f64,
    pub c_bound: f64,
    pub d: u32,
    pub k: u32,
    pub n_syn: NSyn,
}

impl PrivacyParams {
    pub fn new(
        alpha: f64,
        delta_sens: f64,
        c_bound: f64,
        d: u32,
        k: u32,
        n_syn: NSyn,
    ) -> Result<Self> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(Error::domain(format!(
                "alpha = {alpha} must be finite and > 1"
            )));
        }
        if !(delta_sens >= 0.0) {
            return Err(Error::domain(format!(
                "delta_sens = {delta_sens} must be >= 0"
            )));
        }
        if !(c_bound > 0.0) {
            return Err(Error::domain(format!("c_bound = {c_bound} must be > 0")));
        }
        // Both parameters have norm <= C, so the triangle inequality caps the
        // sensitivity at 2C.
        if delta_sens > 2.0 * c_bound {
            return Err(Error::domain(format!(
                "delta_sens = {delta_sens} exceeds 2C = {}",
                2.0 * c_bound
            )));
        }
        if d == 0 || k == 0 {
            return Err(Error::domain("d and k must be >= 1".to_string()));
        }
        if d < k {
            return Err(Error::domain(format!(
                "non-degeneracy requires d >= k, got d={d}, k={k}"
            )));
        }
        if let NSyn::Finite(0) = n_syn {
            return Err(Error::domain("n_syn must be >= 1".to_string()));
        }
        Ok(Self {
            alpha,
            delta_sens,
            c_bound,
            d,
            k,
            n_syn,
        })
    }
}
