//! Exact quadrature oracles for Fisher information and Rényi divergence,
//! Monte-Carlo Fisher estimators, the neural variational Rényi estimator,
//! and the sweep drivers behind the figure-reproduction commands.

pub mod experiments;
pub mod fisher;
pub mod mlp;
pub mod renyi;
pub mod variational;

pub use experiments::{delta_sweep_experiment, plateau_experiment, PlateauConfig, SweepRow};
pub use fisher::{fisher_mc_rician, fisher_mc_score_sq, fisher_quadrature_ncx2};
pub use mlp::Mlp;
pub use renyi::{renyi_finite_n_k1, renyi_ncx2_quadrature};
pub use variational::{variational_renyi, DivergenceEstimate, EstimateMethod, TrainConfig};
