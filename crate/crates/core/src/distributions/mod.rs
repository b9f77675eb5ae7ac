//! Samplers, log-densities and score functions for the release pipeline:
//! Gaussian parameter noise, the released product `Z(v + N)`, Gram matrices,
//! and the non-central chi-squared law of the k = 1 sufficient statistic.

pub mod finite_n;
pub mod ncx2;
pub mod params;
pub mod release;

pub use finite_n::{finite_n_log_pdf_k1, finite_n_pdf_k1};
pub use ncx2::{chi2_log_pdf, NoncentralChiSq};
pub use params::{NSyn, PrivacyParams};
pub use release::{GeneratorPair, Side};
