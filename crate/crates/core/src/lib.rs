//! Privacy accounting for synthetic data released by a linear generator.
//!
//! The release mechanism adds Gaussian noise to the generator parameters and
//! multiplies by a Gaussian latent matrix. This crate computes closed-form
//! Rényi-DP bounds for that mechanism, exact small-case oracles built on
//! quadrature over non-central chi-squared densities, Monte-Carlo Fisher
//! information estimators, and a neural variational Rényi divergence
//! estimator, together with the sweep drivers used by the `synamp` CLI.

// Validation deliberately uses `!(x > 0.0)`-style negated comparisons so
// that NaN arguments are rejected along with out-of-range ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accountant;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod mathkit;

pub use error::{Error, Result};
