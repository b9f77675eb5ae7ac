//! Sweep-table CSV: comma-separated, UTF-8, `.` decimal, first non-comment
//! line is the header, `#`-prefixed metadata lines carry the config hash,
//! seed, tolerance and version. Floats use the shortest round-trip
//! representation, so re-parsing recovers them bit-exactly.

use crate::error::{CliError, CliResult};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use synamp::estimators::SweepRow;

pub const HEADER: [&str; 14] = [
    "experiment",
    "alpha",
    "C",
    "d",
    "k",
    "delta",
    "n_syn",
    "theta_v",
    "theta_w",
    "method",
    "value",
    "stderr",
    "seed",
    "notes",
];

fn fmt_opt_u64(v: Option<u64>) -> String {
    v.map(|n| n.to_string()).unwrap_or_default()
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_rows(
    path: &Path,
    metadata: &BTreeMap<String, String>,
    rows: &[SweepRow],
) -> CliResult<()> {
    let mut raw = Vec::new();
    for (key, value) in metadata {
        writeln!(raw, "# {key}={value}")?;
    }
    {
        let mut w = csv::Writer::from_writer(&mut raw);
        w.write_record(HEADER)
            .map_err(|e| CliError::Io(e.to_string()))?;
        for r in rows {
            w.write_record([
                r.experiment.as_str(),
                &r.alpha.to_string(),
                &r.c_bound.to_string(),
                &r.d.to_string(),
                &r.k.to_string(),
                &r.delta.to_string(),
                &fmt_opt_u64(r.n_syn),
                &r.theta_v.to_string(),
                &r.theta_w.to_string(),
                &r.method,
                &r.value.to_string(),
                &fmt_opt_f64(r.stderr),
                &r.seed.to_string(),
                &r.notes,
            ])
            .map_err(|e| CliError::Io(e.to_string()))?;
        }
        w.flush()?;
    }
    // Single atomic publish so a crashed run never leaves partial rows.
    let tmp = path.with_extension("csv.tmp");
    std::fs::write(&tmp, &raw)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_rows(path: &Path) -> CliResult<(BTreeMap<String, String>, Vec<SweepRow>)> {
    let text = std::fs::read_to_string(path)?;
    let mut metadata = BTreeMap::new();
    let mut body = String::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((key, value)) = rest.trim().split_once('=') {
                metadata.insert(key.trim().to_string(), value.trim().to_string());
            }
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let parse_f64 = |s: &str, what: &str| -> CliResult<f64> {
        s.parse::<f64>()
            .map_err(|_| CliError::Io(format!("bad {what} field: {s:?}")))
    };
    let mut rows = Vec::new();
    for record in reader.records() {
        let rec = record.map_err(|e| CliError::Io(e.to_string()))?;
        if rec.len() != HEADER.len() {
            return Err(CliError::Io(format!(
                "row has {} fields, expected {}",
                rec.len(),
                HEADER.len()
            )));
        }
        rows.push(SweepRow {
            experiment: rec[0].to_string(),
            alpha: parse_f64(&rec[1], "alpha")?,
            c_bound: parse_f64(&rec[2], "C")?,
            d: rec[3]
                .parse()
                .map_err(|_| CliError::Io(format!("bad d: {:?}", &rec[3])))?,
            k: rec[4]
                .parse()
                .map_err(|_| CliError::Io(format!("bad k: {:?}", &rec[4])))?,
            delta: parse_f64(&rec[5], "delta")?,
            n_syn: if rec[6].is_empty() {
                None
            } else {
                Some(
                    rec[6]
                        .parse()
                        .map_err(|_| CliError::Io(format!("bad n_syn: {:?}", &rec[6])))?,
                )
            },
            theta_v: parse_f64(&rec[7], "theta_v")?,
            theta_w: parse_f64(&rec[8], "theta_w")?,
            method: rec[9].to_string(),
            value: parse_f64(&rec[10], "value")?,
            stderr: if rec[11].is_empty() {
                None
            } else {
                Some(parse_f64(&rec[11], "stderr")?)
            },
            seed: rec[12]
                .parse()
                .map_err(|_| CliError::Io(format!("bad seed: {:?}", &rec[12])))?,
            notes: rec[13].to_string(),
        });
    }
    Ok((metadata, rows))
}
