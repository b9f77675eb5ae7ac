use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Order-2 Rényi divergences and Fisher informations of a Cauchy location
/// family with scale `a` against a Gaussian location family with standard
/// deviation `sigma`, both shifted by `delta`.
///
/// The point of the comparison: a pointwise Fisher-information ordering does
/// not imply the same ordering of Rényi divergences at finite shifts, so no
/// distribution-free global comparison theorem can hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub i_cauchy: f64,
    pub i_gauss: f64,
    pub d2_cauchy: f64,
    pub d2_gauss: f64,
}

/// Closed forms (Rényi order fixed at 2): I_cauchy = 1/(2a^2),
/// I_gauss = 1/sigma^2, D2_cauchy = log(1 + delta^2/(2a^2)),
/// D2_gauss = delta^2/sigma^2.
pub fn counterexample_demo(a: f64, sigma: f64, delta: f64) -> Result<CounterexampleReport> {
    if !(a > 0.0 && sigma > 0.0 && delta > 0.0) {
        return Err(Error::domain(format!(
            "counterexample_demo: a = {a}, sigma = {sigma}, delta = {delta} must all be > 0"
        )));
    }
    Ok(CounterexampleReport {
        i_cauchy: 1.0 / (2.0 * a * a),
        i_gauss: 1.0 / (sigma * sigma),
        d2_cauchy: (delta * delta / (2.0 * a * a)).ln_1p(),
        d2_gauss: delta * delta / (sigma * sigma),
    })
}
