//! JSON-configured sweep runner. The schema is strict: unknown keys are
//! rejected, every experiment names its own seed, and the CSV header records
//! the config hash so a table can be traced back to its inputs.

use crate::csvio;
use crate::error::{CliError, CliResult};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;
use synamp::estimators::{
    fisher_mc_score_sq, fisher_quadrature_ncx2, renyi_finite_n_k1, renyi_ncx2_quadrature, SweepRow,
    TrainConfig,
};
use synamp::mathkit::RngStream;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub experiments: Vec<ExperimentSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    /// quadrature | finite-n | variational | fisher-quadrature | fisher-mc
    pub method: String,
    pub alpha: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(default)]
    pub d: Option<u32>,
    #[serde(default)]
    pub d_list: Option<Vec<u32>>,
    #[serde(default)]
    pub k: Option<u32>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub delta_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub n_grid: Option<Vec<u64>>,
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub train: Option<TrainSpec>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainSpec {
    #[serde(default)]
    pub steps: Option<u32>,
    #[serde(default)]
    pub batch: Option<u32>,
    #[serde(default)]
    pub lr: Option<f64>,
    #[serde(default)]
    pub hidden: Option<u32>,
    #[serde(default)]
    pub eval_every: Option<u32>,
    #[serde(default)]
    pub patience: Option<u32>,
    #[serde(default)]
    pub n_eval: Option<u32>,
    #[serde(default)]
    pub n_final: Option<u32>,
    #[serde(default)]
    pub n_runs: Option<u32>,
}

impl TrainSpec {
    fn apply(&self, mut cfg: TrainConfig) -> TrainConfig {
        if let Some(v) = self.steps {
            cfg.steps = v;
        }
        if let Some(v) = self.batch {
            cfg.batch = v;
        }
        if let Some(v) = self.lr {
            cfg.lr = v;
        }
        if let Some(v) = self.hidden {
            cfg.hidden = v;
        }
        if let Some(v) = self.eval_every {
            cfg.eval_every = v;
        }
        if let Some(v) = self.patience {
            cfg.patience = v;
        }
        if let Some(v) = self.n_eval {
            cfg.n_eval = v;
        }
        if let Some(v) = self.n_final {
            cfg.n_final = v;
        }
        if let Some(v) = self.n_runs {
            cfg.n_runs = v;
        }
        cfg
    }
}

impl ExperimentSpec {
    fn d_values(&self) -> CliResult<Vec<u32>> {
        match (&self.d, &self.d_list) {
            (Some(d), None) => Ok(vec![*d]),
            (None, Some(list)) if !list.is_empty() => Ok(list.clone()),
            _ => Err(CliError::Usage(format!(
                "experiment {:?}: exactly one of `d` or a non-empty `d_list` is required",
                self.name
            ))),
        }
    }

    fn delta_values(&self) -> CliResult<Vec<f64>> {
        match (&self.delta, &self.delta_grid) {
            (Some(d), None) => Ok(vec![*d]),
            (None, Some(grid)) if !grid.is_empty() => Ok(grid.clone()),
            (None, None) if self.method.starts_with("fisher") => Ok(vec![0.0]),
            _ => Err(CliError::Usage(format!(
                "experiment {:?}: exactly one of `delta` or a non-empty `delta_grid` is required",
                self.name
            ))),
        }
    }
}

/// Execute every experiment in the config and return the rows plus the
/// header metadata. The collinear harness |v| = C, |w| = C - Delta is used
/// throughout; fisher methods evaluate at the amplitude theta = C.
pub fn run_config(
    config_bytes: &[u8],
    tol: f64,
    threads: usize,
) -> CliResult<(BTreeMap<String, String>, Vec<SweepRow>)> {
    let config: SweepConfig = serde_json::from_slice(config_bytes)
        .map_err(|e| CliError::Usage(format!("config: {e}")))?;

    let mut rows = Vec::new();
    for exp in &config.experiments {
        let k = exp.k.unwrap_or(1);
        if k != 1 {
            return Err(CliError::Usage(format!(
                "experiment {:?}: only k = 1 sweeps are supported (got k = {k})",
                exp.name
            )));
        }
        let base = |d: u32, delta: f64, theta_v: f64, theta_w: f64| SweepRow {
            experiment: exp.name.clone(),
            alpha: exp.alpha,
            c_bound: exp.c,
            d,
            k,
            delta,
            n_syn: None,
            theta_v,
            theta_w,
            method: String::new(),
            value: 0.0,
            stderr: None,
            seed: exp.seed,
            notes: String::new(),
        };
        for d in exp.d_values()? {
            for delta in exp.delta_values()? {
                let theta_v = exp.c;
                let theta_w = exp.c - delta;
                if theta_w < 0.0 {
                    return Err(CliError::Domain(format!(
                        "experiment {:?}: delta {delta} exceeds C = {}",
                        exp.name, exp.c
                    )));
                }
                match exp.method.as_str() {
                    "quadrature" => {
                        let value = renyi_ncx2_quadrature(exp.alpha, d, theta_v, theta_w, tol)?;
                        rows.push(SweepRow {
                            method: "quadrature".to_string(),
                            value,
                            ..base(d, delta, theta_v, theta_w)
                        });
                    }
                    "finite-n" => {
                        let grid = exp.n_grid.as_ref().ok_or_else(|| {
                            CliError::Usage(format!(
                                "experiment {:?}: finite-n needs `n_grid`",
                                exp.name
                            ))
                        })?;
                        for &n in grid {
                            let value = renyi_finite_n_k1(exp.alpha, d, n, theta_v, theta_w, tol)?;
                            rows.push(SweepRow {
                                method: "finite_n_quadrature".to_string(),
                                value,
                                n_syn: Some(n),
                                ..base(d, delta, theta_v, theta_w)
                            });
                        }
                    }
                    "variational" => {
                        let grid = exp.n_grid.as_ref().ok_or_else(|| {
                            CliError::Usage(format!(
                                "experiment {:?}: variational needs `n_grid`",
                                exp.name
                            ))
                        })?;
                        let train = exp
                            .train
                            .map(|t| {
                                t.apply(TrainConfig::ci(exp.alpha, RngStream::new(exp.seed, 0)))
                            })
                            .unwrap_or_else(|| {
                                TrainConfig::ci(exp.alpha, RngStream::new(exp.seed, 0))
                            });
                        let cfg = synamp::estimators::PlateauConfig {
                            alpha: exp.alpha,
                            c_bound: exp.c,
                            delta,
                            d_list: vec![d],
                            n_grid: grid.clone(),
                            train,
                            tol,
                            threads,
                        };
                        for mut row in synamp::estimators::plateau_experiment(&cfg)? {
                            row.experiment = exp.name.clone();
                            rows.push(row);
                        }
                    }
                    "fisher-quadrature" => {
                        let value = fisher_quadrature_ncx2(d, theta_v, tol)?;
                        let mut row = base(d, delta, theta_v, 0.0);
                        row.method = "fisher_quadrature".to_string();
                        row.value = value;
                        rows.push(row);
                    }
                    "fisher-mc" => {
                        let samples = exp.samples.unwrap_or(100_000) as usize;
                        let mut rng = RngStream::new(exp.seed, d as u64).rng();
                        let (value, stderr) = fisher_mc_score_sq(d, theta_v, samples, &mut rng)?;
                        let mut row = base(d, delta, theta_v, 0.0);
                        row.method = "mc".to_string();
                        row.value = value;
                        row.stderr = Some(stderr);
                        row.notes = format!("samples={samples}");
                        rows.push(row);
                    }
                    other => {
                        return Err(CliError::Usage(format!(
                            "experiment {:?}: unknown method {other:?}",
                            exp.name
                        )))
                    }
                }
            }
        }
    }

    let mut meta = BTreeMap::new();
    meta.insert(
        "config_sha256".to_string(),
        hex(&Sha256::digest(config_bytes)),
    );
    meta.insert(
        "seeds".to_string(),
        config
            .experiments
            .iter()
            .map(|e| e.seed.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    meta.insert("tol".to_string(), tol.to_string());
    meta.insert("version".to_string(), env!("CARGO_PKG_VERSION").to_string());
    Ok((meta, rows))
}

pub fn run_to_file(config_path: &Path, out: &Path, tol: f64, threads: usize) -> CliResult<usize> {
    let bytes = std::fs::read(config_path)?;
    let (meta, rows) = run_config(&bytes, tol, threads)?;
    csvio::write_rows(out, &meta, &rows)?;
    Ok(rows.len())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
