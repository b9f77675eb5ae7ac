//! Re-execute the deterministic rows of a sweep CSV and assert that the
//! recomputed values match what was recorded. Stochastic rows (variational,
//! Monte Carlo) are reported as skipped.

use crate::csvio;
use crate::error::{CliError, CliResult};
use std::path::Path;
use synamp::accountant::{criterion_bound, rdp_gaussian};
use synamp::estimators::{fisher_quadrature_ncx2, renyi_finite_n_k1, renyi_ncx2_quadrature};
use synamp::mathkit::{std_normal_cdf, std_normal_quantile};

const MATCH_TOL: f64 = 1e-12;

pub struct VerifyOutcome {
    pub verified: usize,
    pub skipped: usize,
}

fn parse_note_field(notes: &str, key: &str) -> Option<f64> {
    notes.split(';').find_map(|part| {
        let (k, v) = part.trim().split_once('=')?;
        (k == key).then(|| v.parse().ok())?
    })
}

pub fn verify_file(path: &Path, default_tol: f64) -> CliResult<VerifyOutcome> {
    let (meta, rows) = csvio::read_rows(path)?;
    let tol = meta
        .get("tol")
        .and_then(|t| t.parse::<f64>().ok())
        .unwrap_or(default_tol);

    let mut verified = 0usize;
    let mut skipped = 0usize;
    for (i, row) in rows.iter().enumerate() {
        let recomputed = match row.method.as_str() {
            "quadrature" => Some(renyi_ncx2_quadrature(
                row.alpha,
                row.d,
                row.theta_v,
                row.theta_w,
                tol,
            )?),
            "finite_n_quadrature" => {
                let n = row.n_syn.ok_or_else(|| {
                    CliError::Io(format!("row {i}: finite_n_quadrature without n_syn"))
                })?;
                Some(renyi_finite_n_k1(
                    row.alpha,
                    row.d,
                    n,
                    row.theta_v,
                    row.theta_w,
                    tol,
                )?)
            }
            "fisher_quadrature" => Some(fisher_quadrature_ncx2(row.d, row.theta_v, tol)?),
            "criterion" => {
                let alpha = row.alpha;
                let envelope = move |z: f64, t: f64| 0.5 * (2.0 * alpha - 1.0) * (z - t) * (z - t);
                Some(criterion_bound(alpha, 1.0, envelope, 0.0, row.delta, tol)?)
            }
            "gaussian_exact" | "post_processing" => Some(rdp_gaussian(row.alpha, row.delta)),
            "trade_off" | "trade_off_gaussian" | "trade_off_line" => {
                let shift = parse_note_field(&row.notes, "shift").ok_or_else(|| {
                    CliError::Io(format!("row {i}: trade-off row without shift note"))
                })?;
                let t = row.theta_v;
                let gaussian = std_normal_cdf(std_normal_quantile(1.0 - t)? - row.delta);
                let line = (1.0 - t - 2.0 * shift).max(0.0);
                Some(match row.method.as_str() {
                    "trade_off_gaussian" => gaussian,
                    "trade_off_line" => line,
                    _ => gaussian.max(line),
                })
            }
            _ => None,
        };
        match recomputed {
            Some(v) => {
                if (v - row.value).abs() > MATCH_TOL {
                    return Err(CliError::Numerical(format!(
                        "row {i} ({}, {}): recomputed {v} differs from recorded {} by {}",
                        row.experiment,
                        row.method,
                        row.value,
                        (v - row.value).abs()
                    )));
                }
                verified += 1;
            }
            None => skipped += 1,
        }
    }
    Ok(VerifyOutcome { verified, skipped })
}
