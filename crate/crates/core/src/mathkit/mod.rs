//! Numerically stable special functions, adaptive quadrature, root finding
//! and the seeded RNG contract used by every other module.

pub mod bessel;
pub mod normal;
pub mod quad;
pub mod rng;
pub mod roots;

pub use bessel::{bessel_quotient, log_bessel_i, log_scalar_0f1};
pub use normal::{std_normal_cdf, std_normal_log_pdf, std_normal_pdf, std_normal_quantile};
pub use quad::{
    adaptive_quadrature, integrate_left_tail, integrate_to_inf, log_integrate_to_inf,
    QuadratureResult,
};
pub use rng::{ChaCha8Rng, RngStream};
pub use roots::bisect;
