//! Builders for the four figure reproductions: release-size sweep (fig2),
//! sensitivity sweep (fig3), the Gaussian criterion-tightness comparison,
//! and the prior-work trade-off curve.

use crate::csvio;
use crate::error::{CliError, CliResult};
use crate::svg::{self, Series};
use std::collections::BTreeMap;
use std::path::Path;
use synamp::accountant::{criterion_bound, rdp_gaussian, PriorWorkParams};
use synamp::estimators::{
    delta_sweep_experiment, plateau_experiment, PlateauConfig, SweepRow, TrainConfig,
};
use synamp::mathkit::{std_normal_cdf, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Ci,
    Full,
}

impl Profile {
    fn train(&self, alpha: f64, seed: RngStream) -> TrainConfig {
        match self {
            Profile::Ci => TrainConfig::ci(alpha, seed),
            Profile::Full => TrainConfig::paper(alpha, seed),
        }
    }
}

pub const FIG2_D_LIST: [u32; 3] = [2, 5, 10];
pub const FIG2_N_GRID: [u64; 10] = [1, 2, 4, 8, 16, 32, 64, 128, 256, 512];

/// Release divergence against n_syn at the caption parameters
/// k = Delta = 1, C = alpha = 2.
pub fn fig2_rows(
    profile: Profile,
    seed: u64,
    threads: usize,
    tol: f64,
) -> CliResult<Vec<SweepRow>> {
    let cfg = PlateauConfig {
        alpha: 2.0,
        c_bound: 2.0,
        delta: 1.0,
        d_list: FIG2_D_LIST.to_vec(),
        n_grid: FIG2_N_GRID.to_vec(),
        train: profile.train(2.0, RngStream::new(seed, 0)),
        tol,
        threads,
    };
    Ok(plateau_experiment(&cfg)?)
}

/// Gram divergence against the sensitivity at C = alpha = 2, with the
/// local-band envelope in the notes column.
pub fn fig3_rows(seed: u64, tol: f64) -> CliResult<Vec<SweepRow>> {
    let d_list = [5u32, 10, 50];
    let delta_grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    Ok(delta_sweep_experiment(
        2.0,
        2.0,
        &d_list,
        &delta_grid,
        tol,
        seed,
    )?)
}

/// Criterion bound vs the exact Gaussian divergence on a 30-point grid in
/// (0, 3], at alpha = 2 and unit Fisher information.
pub fn gauss_criterion_rows(seed: u64, tol: f64) -> CliResult<Vec<SweepRow>> {
    let alpha = 2.0;
    let mut rows = Vec::new();
    for i in 1..=30 {
        let delta = 0.1 * i as f64;
        let envelope = move |z: f64, t: f64| 0.5 * (2.0 * alpha - 1.0) * (z - t) * (z - t);
        let bound = criterion_bound(alpha, 1.0, envelope, 0.0, delta, tol)?;
        let base = SweepRow {
            experiment: "gauss_criterion".to_string(),
            alpha,
            c_bound: f64::INFINITY,
            d: 0,
            k: 1,
            delta,
            n_syn: None,
            theta_v: delta,
            theta_w: 0.0,
            method: String::new(),
            value: 0.0,
            stderr: None,
            seed,
            notes: "unit-variance Gaussian location family".to_string(),
        };
        rows.push(SweepRow {
            method: "criterion".to_string(),
            value: bound,
            ..base.clone()
        });
        rows.push(SweepRow {
            method: "gaussian_exact".to_string(),
            value: rdp_gaussian(alpha, delta),
            ..base
        });
    }
    Ok(rows)
}

/// The prior-work trade-off curve at Delta = 1, C' = 1, d = 60, n_syn = 1,
/// k = 1: the Gaussian branch, the shifted line branch, and their max.
pub fn prior_tradeoff_rows(seed: u64) -> CliResult<Vec<SweepRow>> {
    let p = PriorWorkParams::new(1.0, 1, 60, 1, 1.0, 2.0)?;
    let shift = p.trade_off_shift();
    let mut rows = Vec::new();
    for i in 1..200 {
        let t = i as f64 / 200.0;
        let z = synamp::mathkit::std_normal_quantile(1.0 - t)?;
        let gaussian = std_normal_cdf(z - p.delta_sens);
        let line = (1.0 - t - 2.0 * shift).max(0.0);
        let base = SweepRow {
            experiment: "prior_tradeoff".to_string(),
            alpha: p.alpha,
            c_bound: f64::INFINITY,
            d: p.d,
            k: p.k,
            delta: p.delta_sens,
            n_syn: Some(p.n_syn),
            theta_v: t,
            theta_w: 0.0,
            method: String::new(),
            value: 0.0,
            stderr: None,
            seed,
            notes: format!("x=type1_error; shift={shift}"),
        };
        rows.push(SweepRow {
            method: "trade_off_gaussian".to_string(),
            value: gaussian,
            ..base.clone()
        });
        rows.push(SweepRow {
            method: "trade_off_line".to_string(),
            value: line,
            ..base.clone()
        });
        rows.push(SweepRow {
            method: "trade_off".to_string(),
            value: gaussian.max(line),
            ..base
        });
    }
    Ok(rows)
}

fn chart_fig2(rows: &[SweepRow], path: &Path) -> CliResult<()> {
    let mut series = Vec::new();
    for &d in &FIG2_D_LIST {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.d == d && r.method == "variational")
            .filter_map(|r| r.n_syn.map(|n| ((n as f64).log2(), r.value)))
            .collect();
        series.push(Series {
            name: format!("d={d} variational"),
            points: pts,
            dashed: false,
        });
        if let Some(plateau) = rows.iter().find(|r| r.d == d && r.method == "quadrature") {
            series.push(Series {
                name: format!("d={d} plateau"),
                points: vec![(0.0, plateau.value), (9.0, plateau.value)],
                dashed: true,
            });
        }
    }
    svg::write_chart(
        path,
        "Release divergence vs number of synthetic records",
        "log2(n_syn)",
        "D_alpha",
        &series,
    )
}

fn chart_fig3(rows: &[SweepRow], path: &Path) -> CliResult<()> {
    let mut series = Vec::new();
    let mut ds: Vec<u32> = rows.iter().map(|r| r.d).collect();
    ds.sort_unstable();
    ds.dedup();
    for d in ds {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.d == d)
            .map(|r| (r.delta, r.value))
            .collect();
        series.push(Series {
            name: format!("d={d} plateau"),
            points: pts,
            dashed: false,
        });
    }
    let post: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.d == rows[0].d)
        .map(|r| (r.delta, rdp_gaussian(r.alpha, r.delta)))
        .collect();
    series.push(Series {
        name: "post-processing".to_string(),
        points: post,
        dashed: true,
    });
    svg::write_chart(
        path,
        "Gram divergence vs sensitivity",
        "Delta",
        "D_alpha",
        &series,
    )
}

fn chart_two_method(
    rows: &[SweepRow],
    methods: &[&str],
    x_of: fn(&SweepRow) -> f64,
    path: &Path,
    title: &str,
    x_label: &str,
) -> CliResult<()> {
    let mut series = Vec::new();
    for (i, m) in methods.iter().enumerate() {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.method == *m)
            .map(|r| (x_of(r), r.value))
            .collect();
        series.push(Series {
            name: m.to_string(),
            points: pts,
            dashed: i % 2 == 1,
        });
    }
    svg::write_chart(path, title, x_label, "value", &series)
}

/// Compute one figure, write `<which>.csv` and `<which>.svg` under `out`.
pub fn run_figure(
    which: &str,
    profile: Profile,
    out_dir: &Path,
    seed: u64,
    threads: usize,
    tol: f64,
) -> CliResult<(std::path::PathBuf, std::path::PathBuf)> {
    std::fs::create_dir_all(out_dir)?;
    let rows = match which {
        "fig2" => fig2_rows(profile, seed, threads, tol)?,
        "fig3" => fig3_rows(seed, tol)?,
        "gauss-criterion" => gauss_criterion_rows(seed, tol)?,
        "prior-tradeoff" => prior_tradeoff_rows(seed)?,
        other => return Err(CliError::Usage(format!("unknown figure {other:?}"))),
    };
    let csv_path = out_dir.join(format!("{which}.csv"));
    let svg_path = out_dir.join(format!("{which}.svg"));
    let mut meta = BTreeMap::new();
    meta.insert("figure".to_string(), which.to_string());
    meta.insert(
        "profile".to_string(),
        match profile {
            Profile::Ci => "ci".to_string(),
            Profile::Full => "full".to_string(),
        },
    );
    meta.insert("seed".to_string(), seed.to_string());
    meta.insert("tol".to_string(), tol.to_string());
    meta.insert("version".to_string(), env!("CARGO_PKG_VERSION").to_string());
    csvio::write_rows(&csv_path, &meta, &rows)?;
    match which {
        "fig2" => chart_fig2(&rows, &svg_path)?,
        "fig3" => chart_fig3(&rows, &svg_path)?,
        "gauss-criterion" => chart_two_method(
            &rows,
            &["criterion", "gaussian_exact"],
            |r| r.delta,
            &svg_path,
            "Criterion bound vs exact Gaussian divergence",
            "Delta",
        )?,
        "prior-tradeoff" => chart_two_method(
            &rows,
            &["trade_off", "trade_off_gaussian"],
            |r| r.theta_v,
            &svg_path,
            "Prior-work trade-off function",
            "type I error",
        )?,
        _ => unreachable!(),
    }
    Ok((csv_path, svg_path))
}
