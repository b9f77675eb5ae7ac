//! Closed-form privacy bounds and conversions: the post-processing baseline,
//! Fisher-information bounds for the non-central chi-squared amplitude, the
//! local amplification band, global release bounds for k = 1 and k > 1, the
//! generic Fisher-to-Rényi criterion integrator, orthogonal alignment for
//! parameter pairs, the prior-work trade-off conversion machinery, and the
//! Cauchy-vs-Gaussian counterexample calculator.

pub mod bounds;
pub mod counterexample;
pub mod criterion;
pub mod prior;
pub mod wishart;

pub use bounds::{
    account, fisher_bounds_ncx2, global_bound_k1, global_bound_multik, local_band_k1, rdp_gaussian,
    BoundReport, FisherBounds, Method, Regime,
};
pub use counterexample::{counterexample_demo, CounterexampleReport};
pub use criterion::criterion_bound;
pub use prior::{no_amplification_threshold, rdp_conversion, PriorRdp, PriorWorkParams};
pub use wishart::{procrustes_min_distance, wishart_path_fisher_bound};
