//! Run artifacts on disk. Every run writes `replications.csv` (one row per
//! replication), `summary.json` (the aggregates), and `manifest.json` (what
//! would be needed to reproduce the run). The draw-cloud run adds its
//! coordinate, subsample and flag tables. All numbers are formatted with
//! the shortest round-trip representation, so a rerun is byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};

use super::bvm::BvmReport;
use super::config::{ExperimentConfig, ExperimentKind};
use super::coverage::CoverageReport;
use super::figure1::Figure1Report;
use super::freedman::FreedmanReport;
use super::scaling::ScalingReport;
use crate::seeding::replication_seed;
use crate::Result;

/// The outcome of any runner, for uniform persistence.
#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentReport {
    Coverage(CoverageReport),
    Freedman(FreedmanReport),
    Scaling(ScalingReport),
    Bvm(BvmReport),
    Figure1(Figure1Report),
}

fn opt_f64(v: &Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

fn write_json(dir: &Path, name: &str, value: &Value) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| crate::invalid(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_text(dir, name, &text)
}

fn replications_csv(report: &ExperimentReport) -> String {
    let mut out = String::new();
    match report {
        ExperimentReport::Coverage(r) => {
            out.push_str("rep,seed,covered,radius,distance,gamma_hat\n");
            for rec in &r.records {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    rec.rep,
                    rec.seed,
                    rec.covered,
                    rec.radius,
                    rec.distance,
                    opt_f64(&rec.gamma_hat)
                );
            }
        }
        ExperimentReport::Freedman(r) => {
            out.push_str("n,rep,seed,sq_error,post_mean_sq_dist,post_var_sq_dist\n");
            for rec in &r.records {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    rec.n, rec.rep, rec.seed, rec.sq_error, rec.post_mean_sq_dist,
                    rec.post_var_sq_dist
                );
            }
        }
        ExperimentReport::Scaling(r) => {
            out.push_str("n,rep,seed,radius,scaled_radius\n");
            for rec in &r.records {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    rec.n, rec.rep, rec.seed, rec.radius, rec.scaled_radius
                );
            }
        }
        ExperimentReport::Bvm(r) => {
            out.push_str("n,rep,seed,discrepancy\n");
            for rec in &r.records {
                let _ =
                    writeln!(out, "{},{},{},{}", rec.n, rec.rep, rec.seed, rec.discrepancy);
            }
        }
        ExperimentReport::Figure1(r) => {
            out.push_str(
                "rep,seed,radius_l2,radius_ellipsoid,accept_rate_l2,accept_rate_ellipsoid,\
                 agreement_rate\n",
            );
            let _ = writeln!(
                out,
                "0,{},{},{},{},{},{}",
                r.seed,
                r.radius_l2,
                r.radius_ellipsoid,
                r.accept_rate_l2,
                r.accept_rate_ellipsoid,
                r.agreement_rate
            );
        }
    }
    out
}

fn norm_name(config: &ExperimentConfig) -> Value {
    match &config.norm {
        Some(norm) => json!(norm.name),
        None => Value::Null,
    }
}

fn summary_json(config: &ExperimentConfig, report: &ExperimentReport) -> Value {
    match report {
        ExperimentReport::Coverage(r) => json!({
            "kind": "coverage",
            "n": r.n,
            "k": r.k,
            "alpha": r.alpha,
            "blowup": r.blowup,
            "norm": norm_name(config),
            "draws": config.draws,
            "replications": r.records.len(),
            "coverage": r.coverage,
            "wilson_low": r.wilson_low,
            "wilson_high": r.wilson_high,
            "scaled_radius_mean": r.scaled_radius_mean,
            "scaled_radius_sd": r.scaled_radius_sd,
        }),
        ExperimentReport::Freedman(r) => json!({
            "kind": "freedman",
            "norm": "l2",
            "draws": config.draws,
            "rows": r.rows.iter().map(|row| json!({
                "n": row.n,
                "k": row.k,
                "replications": row.replications,
                "freq_mean": row.freq_mean,
                "freq_var": row.freq_var,
                "post_mean": row.post_mean,
                "post_var": row.post_var,
                "mean_ratio": row.mean_ratio,
                "variance_ratio": row.variance_ratio,
            })).collect::<Vec<_>>(),
        }),
        ExperimentReport::Scaling(r) => json!({
            "kind": "scaling",
            "alpha": r.alpha,
            "norm": norm_name(config),
            "draws": config.draws,
            "rows": r.rows.iter().map(|row| json!({
                "n": row.n,
                "k": row.k,
                "replications": row.replications,
                "scaled_radius_mean": row.scaled_radius_mean,
                "scaled_radius_sd": row.scaled_radius_sd,
            })).collect::<Vec<_>>(),
        }),
        ExperimentReport::Bvm(r) => json!({
            "kind": "bvm",
            "norm": norm_name(config),
            "draws": config.draws,
            "reference_sd": r.reference_sd,
            "rows": r.rows.iter().map(|row| json!({
                "n": row.n,
                "k": row.k,
                "replications": row.replications,
                "mean_discrepancy": row.mean_discrepancy,
                "sd_discrepancy": row.sd_discrepancy,
            })).collect::<Vec<_>>(),
        }),
        ExperimentReport::Figure1(r) => json!({
            "kind": "figure1",
            "n": r.n,
            "k": r.k,
            "alpha": r.alpha,
            "blowup": r.blowup,
            "draws": r.draws,
            "subsample": r.subsample_draws.len(),
            "gamma_hat": r.gamma_hat,
            "radius_l2": r.radius_l2,
            "radius_ellipsoid": r.radius_ellipsoid,
            "accept_rate_l2": r.accept_rate_l2,
            "accept_rate_ellipsoid": r.accept_rate_ellipsoid,
            "agreement_rate": r.agreement_rate,
        }),
    }
}

/// Write the run's data files under `out_dir` (created if missing) and
/// return the paths written. The manifest is separate; see
/// [`write_manifest`].
pub fn write_outputs(
    config: &ExperimentConfig,
    report: &ExperimentReport,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    written.push(write_text(out_dir, "replications.csv", &replications_csv(report))?);
    written.push(write_json(out_dir, "summary.json", &summary_json(config, report))?);

    if let ExperimentReport::Figure1(r) = report {
        let mut coords = String::from("k,truth,posterior_mean\n");
        for (i, (t, m)) in r.truth.iter().zip(&r.posterior_mean).enumerate() {
            let _ = writeln!(coords, "{},{},{}", i + 1, t, m);
        }
        written.push(write_text(out_dir, "coordinates.csv", &coords)?);

        let mut sub = String::from("draw,k,value\n");
        for (idx, draw) in r.subsample_indices.iter().zip(&r.subsample_draws) {
            for (i, v) in draw.iter().enumerate() {
                let _ = writeln!(sub, "{},{},{}", idx, i + 1, v);
            }
        }
        written.push(write_text(out_dir, "draws_subsample.csv", &sub)?);

        let mut flags = String::from("draw,accept_l2,accept_ellipsoid\n");
        for (i, (a, b)) in r.accept_l2.iter().zip(&r.accept_ellipsoid).enumerate() {
            let _ = writeln!(flags, "{},{},{}", i, a, b);
        }
        written.push(write_text(out_dir, "accept_flags.csv", &flags)?);
    }
    Ok(written)
}

/// Reproduction manifest: the config echo, the master seed with every
/// per-replication seed spelled out, the library version, and how the run
/// was executed (thread count, wall time). The last two vary between
/// machines, so byte comparisons across runs should skip this file.
pub fn write_manifest(
    config: &ExperimentConfig,
    out_dir: &Path,
    started: Instant,
) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let config_echo = serde_json::to_value(config)
        .map_err(|e| crate::invalid(format!("serialization failed: {e}")))?;
    let seeds: Vec<Value> = config
        .n_values()
        .iter()
        .enumerate()
        .map(|(idx, &n)| {
            let reps = match config.kind {
                ExperimentKind::Figure1 => 1,
                _ => config.replications_for(idx),
            };
            let ns: Vec<u64> = (0..reps)
                .map(|rep| replication_seed(config.master_seed, n.to_bits(), rep as u64))
                .collect();
            json!({ "n": n, "seeds": ns })
        })
        .collect();
    let manifest = json!({
        "kind": config.kind.name(),
        "config": config_echo,
        "master_seed": config.master_seed,
        "replication_seeds": seeds,
        "library_version": env!("CARGO_PKG_VERSION"),
        "threads": rayon::current_num_threads(),
        "wall_time_seconds": started.elapsed().as_secs_f64(),
    });
    write_json(out_dir, "manifest.json", &manifest)
}
