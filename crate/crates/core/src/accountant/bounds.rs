use crate::distributions::PrivacyParams;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Rényi divergence of the Gaussian mechanism at sigma = 1: alpha Delta^2 / 2.
/// This is the post-processing baseline every release bound is compared to.
pub fn rdp_gaussian(alpha: f64, delta_sens: f64) -> f64 {
    0.5 * alpha * delta_sens * delta_sens
}

/// The four Fisher-information bounds for the non-central chi-squared
/// amplitude family at (d, theta).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherBounds {
    pub lower: f64,
    pub upper: f64,
    pub upper_sharp: f64,
    pub upper_alt: f64,
}

/// Lower and upper Fisher-information bounds for chi^2_d(theta^2) with
/// respect to the amplitude theta.
///
/// `lower` and `upper` are 2 theta^2 / (2 theta^2 + d) and
/// 2 theta^2 / (2 theta^2 + d - 3); `upper` is additionally clamped at 1,
/// the trivial bound from post-processing the Gaussian location family.
/// `upper_sharp` keeps the quadratic-root form the simplified bound is
/// relaxed from, and `upper_alt` is the alternative bound obtained through a
/// Poincaré inequality. The d - 3 denominators vanish on 2 < d < 3, so d is
/// restricted to integers >= 3.
pub fn fisher_bounds_ncx2(d: u32, theta: f64) -> Result<FisherBounds> {
    if d < 3 {
        return Err(Error::domain(format!(
            "fisher_bounds_ncx2: d = {d} must be >= 3"
        )));
    }
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::domain(format!(
            "fisher_bounds_ncx2: theta = {theta} must be >= 0"
        )));
    }
    let df = d as f64;
    let t2 = theta * theta;
    let lower = 2.0 * t2 / (2.0 * t2 + df);
    let upper = if theta == 0.0 {
        0.0
    } else {
        (2.0 * t2 / (2.0 * t2 + df - 3.0)).min(1.0)
    };
    // Root of the quadratic I^2 + I (theta^2 + (d-3)/2) - theta^2 <= 0,
    // rationalized; relaxing sqrt(A^2 + 4 theta^2) to A recovers `upper`.
    let half_shift = t2 + 0.5 * (df - 3.0);
    let upper_sharp = if theta == 0.0 {
        0.0
    } else {
        2.0 * t2 / (half_shift + (half_shift * half_shift + 4.0 * t2).sqrt())
    };
    let upper_alt = 2.0 * t2 * (t2 + 2.0 * df) / (2.0 * df * df + t2 * (t2 + 2.0 * df));
    Ok(FisherBounds {
        lower,
        upper,
        upper_sharp,
        upper_alt,
    })
}

/// Amplification band (eta_lo, eta_hi) for k = 1 in the high-privacy regime:
/// eta_lo = 2|w|^2/(2|w|^2 + d), eta_hi = 2C^2/(2C^2 + d - 3). Multiplying
/// the band by the Gaussian baseline alpha Delta^2 / 2 brackets the release
/// divergence for small sensitivity.
pub fn local_band_k1(d: u32, norm_w: f64, c_bound: f64) -> Result<(f64, f64)> {
    if d < 3 {
        return Err(Error::domain(format!(
            "local_band_k1: d = {d} must be >= 3"
        )));
    }
    if !(norm_w >= 0.0 && norm_w <= c_bound) {
        return Err(Error::domain(format!(
            "local_band_k1: need 0 <= |w| <= C, got |w| = {norm_w}, C = {c_bound}"
        )));
    }
    let df = d as f64;
    let w2 = norm_w * norm_w;
    let c2 = c_bound * c_bound;
    Ok((2.0 * w2 / (2.0 * w2 + df), 2.0 * c2 / (2.0 * c2 + df - 3.0)))
}

/// Global release bound for k = 1, valid for every sensitivity:
/// (1/(alpha-1)) log f(alpha, C, d, Delta) with
/// f = 1 + alpha sqrt(2C^2/(2C^2+d-3)) (e^{(alpha-1)(2alpha-1) Delta^2/2} - 1)
///     / ((alpha-1)(2alpha-1) Delta).
/// Delta = 0 returns the analytic limit 0 (the singularity is removable).
pub fn global_bound_k1(alpha: f64, c_bound: f64, d: u32, delta_sens: f64) -> Result<f64> {
    if d < 3 {
        return Err(Error::domain(format!(
            "global_bound_k1: d = {d} must be >= 3"
        )));
    }
    if !(alpha > 1.0) {
        return Err(Error::domain(format!(
            "global_bound_k1: alpha = {alpha} must be > 1"
        )));
    }
    if !(c_bound > 0.0) {
        return Err(Error::domain(format!(
            "global_bound_k1: C = {c_bound} must be > 0"
        )));
    }
    if !(delta_sens >= 0.0) {
        return Err(Error::domain(format!(
            "global_bound_k1: Delta = {delta_sens} must be >= 0"
        )));
    }
    if delta_sens == 0.0 {
        return Ok(0.0);
    }
    let c2 = 2.0 * c_bound * c_bound;
    let fisher_root = (c2 / (c2 + d as f64 - 3.0)).sqrt();
    let rate = (alpha - 1.0) * (2.0 * alpha - 1.0);
    let f = 1.0
        + alpha * fisher_root * (0.5 * rate * delta_sens * delta_sens).exp_m1()
            / (rate * delta_sens);
    Ok(f.ln() / (alpha - 1.0))
}

/// Global release bound for k >= 1: the k = 1 bound at width floor(d / k).
pub fn global_bound_multik(
    alpha: f64,
    c_bound: f64,
    d: u32,
    k: u32,
    delta_sens: f64,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain(
            "global_bound_multik: k must be >= 1".to_string(),
        ));
    }
    let m = d / k;
    if m < 3 {
        return Err(Error::domain(format!(
            "global_bound_multik: floor(d/k) = {m} must be >= 3 (d = {d}, k = {k})"
        )));
    }
    global_bound_k1(alpha, c_bound, m, delta_sens)
}

/// Which bound produced a report value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PostProcessing,
    LocalBand,
    GlobalK1,
    GlobalMultik,
    Criterion,
    PriorWork,
    Minimum,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::PostProcessing => "post_processing",
            Method::LocalBand => "local_band",
            Method::GlobalK1 => "global_k1",
            Method::GlobalMultik => "global_multik",
            Method::Criterion => "criterion",
            Method::PriorWork => "prior_work",
            Method::Minimum => "minimum",
        };
        f.write_str(s)
    }
}

/// Where the inputs sit relative to the post-processing baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Amplified,
    NotAmplified,
    Boundary,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::Amplified => "amplified",
            Regime::NotAmplified => "not_amplified",
            Regime::Boundary => "boundary",
        };
        f.write_str(s)
    }
}

/// A named bound value with its regime classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub value: f64,
    pub method: Method,
    pub regime: Regime,
    pub inputs: PrivacyParams,
    pub notes: String,
}

/// Combined accounting rule: the minimum of the post-processing baseline and
/// the global release bound at floor(d/k).
///
/// Both constituents upper-bound the release divergence for every n_syn (the
/// Gram plateau dominates all finite releases, and post-processing dominates
/// the plateau), so their minimum is a valid bound. The combination is
/// tagged `minimum` and both constituent values are kept in the notes.
pub fn account(params: &PrivacyParams) -> Result<BoundReport> {
    let post = rdp_gaussian(params.alpha, params.delta_sens);
    let global = global_bound_multik(
        params.alpha,
        params.c_bound,
        params.d,
        params.k,
        params.delta_sens,
    )?;
    let value = post.min(global);
    let regime = if params.delta_sens == 0.0 {
        Regime::Boundary
    } else if global < post {
        Regime::Amplified
    } else {
        Regime::NotAmplified
    };
    Ok(BoundReport {
        value,
        method: Method::Minimum,
        regime,
        inputs: *params,
        notes: format!("post_processing={post:.12e} global={global:.12e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::NSyn;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn gaussian_baseline() {
        assert_eq!(rdp_gaussian(2.0, 1.0), 1.0);
        assert_eq!(rdp_gaussian(3.0, 0.0), 0.0);
        assert_eq!(rdp_gaussian(3.0, 0.5), 0.375);
    }

    #[test]
    fn fisher_bounds_values() {
        let b = fisher_bounds_ncx2(4, 0.0).unwrap();
        assert_eq!(
            (b.lower, b.upper, b.upper_sharp, b.upper_alt),
            (0.0, 0.0, 0.0, 0.0)
        );

        let b = fisher_bounds_ncx2(4, 1.0).unwrap();
        assert_abs_diff_eq!(b.lower, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.upper, 2.0 / 3.0, epsilon = 1e-15);

        // Alternative bound can beat the simplified one: d=10, theta=1.
        let b = fisher_bounds_ncx2(10, 1.0).unwrap();
        assert_abs_diff_eq!(b.upper_alt, 42.0 / 221.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.upper, 2.0 / 9.0, epsilon = 1e-15);
        assert!(b.upper_alt < b.upper);

        // Clamp at 1 when d = 3.
        let b = fisher_bounds_ncx2(3, 5.0).unwrap();
        assert_eq!(b.upper, 1.0);
    }

    #[test]
    fn fisher_bounds_sandwich_grid() {
        for &d in &[4u32, 10, 50, 100] {
            for &theta in &[0.25, 0.5, 1.0, 2.0, 4.0] {
                let b = fisher_bounds_ncx2(d, theta).unwrap();
                assert!(b.lower <= b.upper_sharp + 1e-15, "d={d} theta={theta}");
                assert!(b.upper_sharp <= b.upper + 1e-15, "d={d} theta={theta}");
                assert!(b.lower <= b.upper_alt + 1e-15, "d={d} theta={theta}");
            }
        }
    }

    #[test]
    fn fisher_bounds_asymptotics() {
        // d -> infinity at fixed theta drives everything to 0.
        let b = fisher_bounds_ncx2(1_000_000, 1.0).unwrap();
        assert!(b.upper < 1e-3);
        // theta -> infinity at fixed d drives everything to 1.
        let b = fisher_bounds_ncx2(10, 1e3).unwrap();
        assert!(b.lower > 1.0 - 1e-3);
        assert!(b.upper_alt > 1.0 - 1e-3);
    }

    #[test]
    fn local_band_values() {
        let (lo, _) = local_band_k1(17, 0.0, 2.0).unwrap();
        assert_eq!(lo, 0.0);
        let (lo, hi) = local_band_k1(50, 1.0, 2.0).unwrap();
        assert_abs_diff_eq!(lo, 2.0 / 52.0, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 8.0 / 55.0, epsilon = 1e-15);
        // C -> infinity: no amplification.
        let (_, hi) = local_band_k1(50, 1.0, 1e9).unwrap();
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-9);
        assert!(local_band_k1(2, 0.5, 1.0).is_err());
        assert!(local_band_k1(10, 2.0, 1.0).is_err());
    }

    #[test]
    fn global_bound_values() {
        assert_eq!(global_bound_k1(2.0, 1.0, 10, 0.0).unwrap(), 0.0);
        // Independent high-precision evaluation of the displayed formula.
        let v = global_bound_k1(2.0, 1.0, 103, 0.1).unwrap();
        let f = 1.0 + 2.0 * (2.0f64 / 102.0).sqrt() * ((0.015f64).exp() - 1.0) / 0.3;
        assert_relative_eq!(v, f.ln(), max_relative = 1e-12);
        assert_relative_eq!(v, 0.01401, max_relative = 1e-3);
        // Monotone in C.
        assert!(
            global_bound_k1(2.0, 2.0, 50, 1.0).unwrap()
                > global_bound_k1(2.0, 1.0, 50, 1.0).unwrap()
        );
        assert!(global_bound_k1(2.0, 1.0, 2, 1.0).is_err());
        // Continuity at Delta -> 0.
        assert!(global_bound_k1(2.0, 1.0, 10, 1e-9).unwrap() < 1e-8);
    }

    #[test]
    fn multik_reduces_by_floor() {
        let a = global_bound_multik(2.0, 2.0, 100, 10, 0.5).unwrap();
        assert_eq!(a, global_bound_k1(2.0, 2.0, 10, 0.5).unwrap());
        let b = global_bound_multik(2.0, 2.0, 109, 10, 0.5).unwrap();
        assert_eq!(a, b); // floor(10.9) = 10
        let c = global_bound_multik(2.0, 2.0, 17, 1, 0.25).unwrap();
        assert_eq!(c, global_bound_k1(2.0, 2.0, 17, 0.25).unwrap());
        assert!(global_bound_multik(2.0, 2.0, 20, 10, 0.5).is_err());
    }

    #[test]
    fn account_combines_and_classifies() {
        let p = PrivacyParams::new(2.0, 0.0, 2.0, 50, 1, NSyn::Infinite).unwrap();
        let r = account(&p).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.regime, Regime::Boundary);
        assert_eq!(r.method, Method::Minimum);

        // Small d: post-processing wins.
        let p = PrivacyParams::new(2.0, 1.0, 100.0, 3, 1, NSyn::Infinite).unwrap();
        let r = account(&p).unwrap();
        assert_eq!(r.regime, Regime::NotAmplified);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
        assert!(global_bound_k1(2.0, 100.0, 3, 1.0).unwrap() > 1.0);

        // Large d: the global bound wins.
        let p = PrivacyParams::new(2.0, 1.0, 2.0, 200, 1, NSyn::Infinite).unwrap();
        let r = account(&p).unwrap();
        assert_eq!(r.regime, Regime::Amplified);
        assert!(r.value < 1.0);
        assert_eq!(r.value, global_bound_k1(2.0, 2.0, 200, 1.0).unwrap());
    }

    #[test]
    fn account_monotonicity_grid() {
        // Non-increasing in d, non-decreasing in Delta and in C.
        let at = |delta: f64, c: f64, d: u32| {
            account(&PrivacyParams::new(2.0, delta, c, d, 1, NSyn::Infinite).unwrap())
                .unwrap()
                .value
        };
        for &c in &[1.0, 2.0, 4.0] {
            for &delta in &[0.1, 0.5, 1.0] {
                assert!(at(delta, c, 10) >= at(delta, c, 50));
                assert!(at(delta, c, 50) >= at(delta, c, 400));
            }
        }
        for &d in &[5u32, 40, 300] {
            assert!(at(0.2, 2.0, d) <= at(0.6, 2.0, d));
            assert!(at(0.6, 2.0, d) <= at(1.0, 2.0, d));
            assert!(at(0.5, 1.0, d) <= at(0.5, 2.0, d));
            assert!(at(0.5, 2.0, d) <= at(0.5, 4.0, d));
        }
    }
}
