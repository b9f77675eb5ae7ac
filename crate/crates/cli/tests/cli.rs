//! End-to-end tests of the binary: flag parsing, exit codes, CSV/SVG
//! artifacts, sweep determinism and the verify round trip.

use std::path::Path;
use std::process::{Command, Output};

fn synamp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synamp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn bound_minimum_is_amplified_for_wide_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = synamp(
        &[
            "bound", "--alpha", "2", "--C", "2", "--d", "50", "--k", "1", "--delta", "1",
            "--method", "min",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("amplified"), "{text}");
    let value: f64 = text
        .lines()
        .nth(1)
        .and_then(|l| l.split_whitespace().nth(1))
        .and_then(|v| v.parse().ok())
        .unwrap();
    assert!(value < 1.0);
}

#[test]
fn bound_zero_delta_is_boundary_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = synamp(
        &[
            "bound", "--alpha", "2", "--C", "2", "--d", "50", "--delta", "0", "--json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["regime"], "boundary");
}

#[test]
fn domain_error_exits_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = synamp(
        &[
            "bound", "--alpha", "2", "--C", "2", "--d", "2", "--delta", "1", "--method", "global",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_error_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = synamp(&["bound", "--alpha", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = synamp(
        &[
            "renyi",
            "--method",
            "finite-n",
            "--alpha",
            "2",
            "--d",
            "5",
            "--theta-v",
            "1",
            "--theta-w",
            "0.5",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2), "finite-n without --n-syn");
}

#[test]
fn fisher_clamps_upper_at_one_for_d3() {
    let dir = tempfile::tempdir().unwrap();
    let out = synamp(
        &[
            "fisher",
            "--d",
            "3",
            "--theta",
            "1",
            "--samples",
            "2000",
            "--json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["upper"], 1.0);
    assert_eq!(v[0]["status"], "ok");
}

#[test]
fn sweep_is_byte_identical_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{
  "experiments": [
    {"name": "plateaus", "method": "quadrature", "alpha": 2.0, "C": 2.0,
     "d_list": [5, 10], "k": 1, "delta_grid": [0.5, 1.0], "seed": 3},
    {"name": "finite", "method": "finite-n", "alpha": 2.0, "C": 2.0,
     "d": 5, "delta": 1.0, "n_grid": [2, 8], "seed": 4},
    {"name": "vari", "method": "variational", "alpha": 2.0, "C": 2.0,
     "d": 4, "delta": 1.0, "n_grid": [2],
     "train": {"steps": 120, "batch": 64, "eval_every": 40, "patience": 2,
               "n_eval": 400, "n_final": 600, "n_runs": 2},
     "seed": 5}
  ]
}"#;
    std::fs::write(dir.path().join("config.json"), config).unwrap();
    let run = |out_name: &str| {
        let out = synamp(
            &[
                "sweep",
                "config.json",
                "--out",
                out_name,
                "--tol",
                "1e-7",
                "--threads",
                "2",
            ],
            dir.path(),
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        std::fs::read(dir.path().join(out_name)).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(
        a, b,
        "sweep output must be byte-identical under a fixed config"
    );

    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# config_sha256="));
    // stderr column populated only on the stochastic rows.
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let (method, stderr) = (fields[9], fields[11]);
        if method == "variational" || method == "mc" {
            assert!(!stderr.is_empty(), "{line}");
        } else {
            assert!(stderr.is_empty(), "{line}");
        }
    }

    let out = synamp(&["verify", "a.csv", "--tol", "1e-7"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(
        stdout(&out).contains("verified 7 deterministic rows, skipped 1"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn sweep_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"experiments": [{"name": "x", "method": "quadrature", "alpha": 2.0,
        "C": 2.0, "d": 5, "delta": 1.0, "seed": 1, "bogus_key": 7}]}"#;
    std::fs::write(dir.path().join("config.json"), config).unwrap();
    let out = synamp(&["sweep", "config.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus_key"));
}

#[test]
fn empty_sweep_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("config.json"), r#"{"experiments": []}"#).unwrap();
    let out = synamp(&["sweep", "config.json", "--out", "empty.csv"], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("empty.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.iter().filter(|l| !l.starts_with('#')).count() == 1);
    assert!(lines.last().unwrap().starts_with("experiment,alpha,C,"));
}

#[test]
fn figures_emit_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = synamp(
        &["figures", "--which", "gauss-criterion", "--out", "figs"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = dir.path().join("figs/gauss-criterion.csv");
    let svg = dir.path().join("figs/gauss-criterion.svg");
    assert!(csv.exists() && svg.exists());
    let svg_text = std::fs::read_to_string(svg).unwrap();
    assert!(svg_text.contains("<polyline"));
    assert!(svg_text.contains("Delta"));

    // Criterion bound dominates the exact divergence on the whole grid.
    let text = std::fs::read_to_string(csv).unwrap();
    let mut by_delta: std::collections::BTreeMap<String, (Option<f64>, Option<f64>)> =
        Default::default();
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let entry = by_delta.entry(fields[5].to_string()).or_default();
        let value: f64 = fields[10].parse().unwrap();
        match fields[9] {
            "criterion" => entry.0 = Some(value),
            "gaussian_exact" => entry.1 = Some(value),
            _ => {}
        }
    }
    assert_eq!(by_delta.len(), 30);
    for (delta, (bound, exact)) in by_delta {
        assert!(bound.unwrap() >= exact.unwrap(), "delta {delta}");
    }
}

#[test]
fn unknown_figure_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = synamp(&["figures", "--which", "fig9"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fisher_at_zero_theta_is_all_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let out = synamp(
        &[
            "fisher",
            "--d",
            "10",
            "--theta",
            "0",
            "--samples",
            "2000",
            "--json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in [
        "lower",
        "quadrature",
        "mc",
        "upper",
        "upper_sharp",
        "upper_alt",
    ] {
        assert_eq!(v[0][key], 0.0, "{key}");
    }
}

#[test]
fn prior_tradeoff_has_both_regions() {
    let dir = tempfile::tempdir().unwrap();
    let out = synamp(
        &["figures", "--which", "prior-tradeoff", "--out", "figs"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("figs/prior-tradeoff.csv")).unwrap();
    let mut by_t: std::collections::BTreeMap<String, (f64, f64, f64)> = Default::default();
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let entry = by_t.entry(fields[7].to_string()).or_insert((0.0, 0.0, 0.0));
        let value: f64 = fields[10].parse().unwrap();
        match fields[9] {
            "trade_off_gaussian" => entry.0 = value,
            "trade_off_line" => entry.1 = value,
            "trade_off" => entry.2 = value,
            other => panic!("unexpected method {other}"),
        }
    }
    let mut gaussian_wins = 0;
    let mut line_wins = 0;
    for (t, (gaussian, line, max)) in by_t {
        assert_eq!(max, gaussian.max(line), "t={t}");
        if gaussian > line {
            gaussian_wins += 1;
        } else if line > gaussian {
            line_wins += 1;
        }
    }
    assert!(
        gaussian_wins > 0 && line_wins > 0,
        "piecewise shape needs both regions"
    );
}

#[test]
fn verify_detects_tampered_values() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"experiments": [{"name": "x", "method": "quadrature", "alpha": 2.0,
        "C": 2.0, "d": 5, "delta": 1.0, "seed": 1}]}"#;
    std::fs::write(dir.path().join("config.json"), config).unwrap();
    let out = synamp(&["sweep", "config.json", "--out", "t.csv"], dir.path());
    assert!(out.status.success());
    let path = dir.path().join("t.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    let value: f64 = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .nth(10)
        .unwrap()
        .parse()
        .unwrap();
    std::fs::write(
        &path,
        text.replace(&value.to_string(), &(value + 1e-6).to_string()),
    )
    .unwrap();
    let out = synamp(&["verify", "t.csv"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(4),
        "tampered row must fail verification"
    );
}
