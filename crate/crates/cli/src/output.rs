//! CSV and JSON artifacts of a run.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use smc_mmle::{LatentPoint, ParticleCloud, RunTrace};

use crate::experiment::RunOutcome;

/// Shortest text that parses back to the same `f64` (at most 17
/// significant digits).
pub fn full(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:?}")
    }
}

fn csv_writer(path: &Path) -> std::io::Result<csv::Writer<fs::File>> {
    Ok(csv::Writer::from_writer(fs::File::create(path)?))
}

fn io(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}

/// `iter,theta_0..theta_{d-1},ess,accept,elapsed_ns`. Times are written as
/// 0 unless `timing` is set.
pub fn write_trace(path: &Path, trace: &RunTrace, timing: bool) -> std::io::Result<()> {
    let dim = trace.records.first().map_or(0, |r| r.theta.len());
    let mut w = csv_writer(path)?;
    let mut header = vec!["iter".to_string()];
    header.extend((0..dim).map(|i| format!("theta_{i}")));
    header.extend(["ess", "accept", "elapsed_ns"].map(String::from));
    w.write_record(&header).map_err(io)?;
    for r in &trace.records {
        let mut row = vec![r.iter.to_string()];
        row.extend(r.theta.iter().map(|t| full(*t)));
        row.push(full(r.ess));
        row.push(full(r.accept));
        row.push(if timing { r.elapsed_ns.to_string() } else { "0".into() });
        w.write_record(&row).map_err(io)?;
    }
    w.flush()
}

/// `index,x_0..x_{d-1},weight` with normalized weights.
pub fn write_particles(path: &Path, cloud: &ParticleCloud) -> std::io::Result<()> {
    let dim = cloud.particles.first().map_or(0, LatentPoint::len);
    let mut w = csv_writer(path)?;
    let mut header = vec!["index".to_string()];
    header.extend((0..dim).map(|i| format!("x_{i}")));
    header.push("weight".into());
    w.write_record(&header).map_err(io)?;
    for (i, (x, wt)) in cloud.particles.iter().zip(cloud.weights()).enumerate() {
        let mut row = vec![i.to_string()];
        match x {
            LatentPoint::Real(v) => row.extend(v.iter().map(|c| full(*c))),
            LatentPoint::Discrete(v) => row.extend(v.iter().map(|c| c.to_string())),
        }
        row.push(full(wt));
        w.write_record(&row).map_err(io)?;
    }
    w.flush()
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

pub struct SummaryContext<'a> {
    pub label: &'a str,
    pub model: &'a str,
    pub replication: usize,
    pub seed: u64,
    pub config_echo: &'a str,
}

pub fn summary_json(ctx: &SummaryContext<'_>, outcome: &RunOutcome) -> Value {
    let trace = &outcome.trace;
    let last = trace.records.last();
    let metadata: Map<String, Value> =
        trace.metadata.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    json!({
        "algorithm": ctx.label,
        "model": ctx.model,
        "replication": ctx.replication,
        "seed": ctx.seed,
        "iterations": trace.iterations(),
        "final_theta": trace.final_theta().iter().map(|t| finite_or_null(*t)).collect::<Vec<_>>(),
        "final_ess": last.map_or(Value::Null, |r| finite_or_null(r.ess)),
        "runtime_seconds": outcome.runtime_seconds,
        "mse": outcome.mse.map_or(Value::Null, finite_or_null),
        "ari": outcome.ari.map_or(Value::Null, finite_or_null),
        "divergences": trace.divergences.len(),
        "first_divergence": trace.divergences.first(),
        "metadata": metadata,
        "version": env!("CARGO_PKG_VERSION"),
        "config": ctx.config_echo,
    })
}

/// Writes trace.csv, particles.csv (when the run has a final cloud) and
/// summary.json into `dir`.
pub fn write_run(dir: &Path, ctx: &SummaryContext<'_>, outcome: &RunOutcome, timing: bool) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    write_trace(&dir.join("trace.csv"), &outcome.trace, timing)?;
    if let Some(cloud) = &outcome.trace.final_cloud {
        write_particles(&dir.join("particles.csv"), cloud)?;
    }
    let text = serde_json::to_string_pretty(&summary_json(ctx, outcome)).map_err(std::io::Error::other)?;
    fs::write(dir.join("summary.json"), text + "\n")
}

/// One row per (algorithm, replication).
pub struct ComparisonRow {
    pub algorithm: String,
    pub replication: usize,
    pub seed: u64,
    pub theta: Vec<f64>,
    pub mse: Option<f64>,
    pub ari: Option<f64>,
    pub iterations: usize,
    pub runtime_seconds: f64,
}

pub fn write_comparison(path: &Path, rows: &[ComparisonRow]) -> std::io::Result<()> {
    let dim = rows.iter().map(|r| r.theta.len()).max().unwrap_or(0);
    let mut w = csv_writer(path)?;
    let mut header: Vec<String> = ["algorithm", "replication", "seed"].map(String::from).to_vec();
    header.extend((0..dim).map(|i| format!("theta_{i}")));
    header.extend(["mse", "ari", "iterations", "runtime_s"].map(String::from));
    w.write_record(&header).map_err(io)?;
    let opt = |v: Option<f64>| v.map(full).unwrap_or_default();
    for r in rows {
        let mut row = vec![r.algorithm.clone(), r.replication.to_string(), r.seed.to_string()];
        row.extend((0..dim).map(|i| r.theta.get(i).map_or(String::new(), |t| full(*t))));
        row.push(opt(r.mse));
        row.push(opt(r.ari));
        row.push(r.iterations.to_string());
        row.push(full(r.runtime_seconds));
        w.write_record(&row).map_err(io)?;
    }
    w.flush()
}
