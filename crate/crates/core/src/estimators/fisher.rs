use crate::distributions::NoncentralChiSq;
use crate::error::{Error, Result};
use crate::mathkit::{bessel_quotient, integrate_to_inf};
use rand::Rng;

/// Fisher information of chi^2_d(theta^2) with respect to the amplitude, by
/// quadrature of score^2 against the density over (0, inf).
pub fn fisher_quadrature_ncx2(d: u32, theta: f64, tol: f64) -> Result<f64> {
    if d < 3 {
        return Err(Error::domain(format!(
            "fisher_quadrature_ncx2: d = {d} must be >= 3"
        )));
    }
    let dist = NoncentralChiSq::new(d, theta)?;
    if theta == 0.0 {
        return Ok(0.0);
    }
    let integrand = move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let s = dist.score(x).expect("x > 0");
        let lp = dist.log_pdf(x).expect("x > 0");
        s * s * lp.exp()
    };
    Ok(integrate_to_inf(integrand, 0.0, tol, Some(dist.mean()))?.value)
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Monte-Carlo Fisher estimate as the sample mean of score^2 over
/// chi^2_d(theta^2) draws. Returns (estimate, standard error).
pub fn fisher_mc_score_sq(
    d: u32,
    theta: f64,
    n_samples: usize,
    rng: &mut impl Rng,
) -> Result<(f64, f64)> {
    if n_samples < 1000 {
        return Err(Error::domain(format!(
            "fisher_mc_score_sq: n_samples = {n_samples} must be >= 1000"
        )));
    }
    let dist = NoncentralChiSq::new(d, theta)?;
    if theta == 0.0 {
        return Ok((0.0, 0.0));
    }
    let values: Vec<f64> = (0..n_samples)
        .map(|_| {
            let x = dist.sample(rng);
            let s = dist.score(x).expect("sample is positive");
            s * s
        })
        .collect();
    Ok(mean_and_stderr(&values))
}

// Bessel quotient extended to the half-integer orders below the general
// evaluator's range: R_{-1/2} = tanh, R_{1/2} = coth - 1/x.
fn quotient_any(nu: f64, x: f64) -> Result<f64> {
    if nu == -0.5 {
        Ok(x.tanh())
    } else if nu == 0.5 {
        Ok(1.0 / x.tanh() - 1.0 / x)
    } else {
        bessel_quotient(nu, x)
    }
}

/// Monte-Carlo Fisher estimate through the generalized Rician
/// representation: E[Y (R_{d/2-1}(Y) - R_{d/2}(Y))] with Y = theta sqrt(X)
/// and X ~ chi^2_{d+2}(theta^2). Returns (estimate, standard error).
pub fn fisher_mc_rician(
    d: u32,
    theta: f64,
    n_samples: usize,
    rng: &mut impl Rng,
) -> Result<(f64, f64)> {
    if n_samples < 1000 {
        return Err(Error::domain(format!(
            "fisher_mc_rician: n_samples = {n_samples} must be >= 1000"
        )));
    }
    if theta == 0.0 {
        NoncentralChiSq::new(d, 0.0)?;
        return Ok((0.0, 0.0));
    }
    let boosted = NoncentralChiSq::new(d + 2, theta)?;
    let nu = 0.5 * d as f64 - 1.0;
    let values: Vec<f64> = (0..n_samples)
        .map(|_| {
            let y = theta * boosted.sample(rng).sqrt();
            let gap = quotient_any(nu, y)? - quotient_any(nu + 1.0, y)?;
            Ok(y * gap)
        })
        .collect::<Result<_>>()?;
    Ok(mean_and_stderr(&values))
}
