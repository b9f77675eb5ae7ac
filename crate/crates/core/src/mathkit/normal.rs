use crate::error::{Error, Result};
use libm::erfc;
use statrs::function::erf::erfc_inv;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Standard normal density.
pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z - LN_SQRT_2PI).exp()
}

/// Log of the standard normal density.
pub fn std_normal_log_pdf(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

/// Standard normal CDF via the complementary error function.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

/// Inverse standard normal CDF on the open interval (0, 1).
///
/// Seeded by the erfc inverse and polished with one Newton step against
/// [`std_normal_cdf`], which brings the round trip below 1e-12.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "std_normal_quantile: p={p} must lie strictly inside (0, 1)"
        )));
    }
    let mut z = -SQRT_2 * erfc_inv(2.0 * p);
    let pdf = std_normal_pdf(z);
    if pdf > 1e-280 {
        z -= (std_normal_cdf(z) - p) / pdf;
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    // erf(z) = 2/sqrt(pi) sum (-1)^k z^{2k+1} / (k! (2k+1)), the series oracle.
    fn erf_series(z: f64) -> f64 {
        let mut term = z;
        let mut sum = z;
        for k in 1..200 {
            let kf = k as f64;
            term *= -z * z / kf;
            sum += term / (2.0 * kf + 1.0);
            if term.abs() < 1e-18 {
                break;
            }
        }
        sum * 2.0 / std::f64::consts::PI.sqrt()
    }

    #[test]
    fn cdf_symmetry_and_oracle() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        let expected = 0.5 * (1.0 + erf_series(1.0 / SQRT_2));
        assert_abs_diff_eq!(expected, 0.841_344_746_068_542_9, epsilon = 1e-15);
        assert_abs_diff_eq!(std_normal_cdf(1.0), expected, epsilon = 1e-15);
        for &z in &[-3.0, -0.7, 0.3, 2.4] {
            assert_abs_diff_eq!(
                std_normal_cdf(z),
                0.5 * (1.0 + erf_series(z / SQRT_2)),
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(std_normal_cdf(z) + std_normal_cdf(-z), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        assert_eq!(std_normal_quantile(0.5).unwrap(), 0.0);
        for i in 1..40 {
            let p = i as f64 / 40.0;
            let z = std_normal_quantile(p).unwrap();
            assert_abs_diff_eq!(std_normal_cdf(z), p, epsilon = 1e-13);
        }
        assert_relative_eq!(
            std_normal_quantile(0.841_344_746_068_542_9).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn quantile_domain() {
        assert!(std_normal_quantile(0.0).is_err());
        assert!(std_normal_quantile(1.0).is_err());
        assert!(std_normal_quantile(-0.1).is_err());
    }
}
