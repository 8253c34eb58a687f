use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Diagnostic, ExperimentConfig};
use super::run::{ExperimentResult, Summary};
use crate::error::{Error, Result};
use crate::geometry::{AmbientPoint, StereographicProjection};

pub const RESULTS_CSV: &str = "results.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const SAMPLES_CSV: &str = "samples.csv";
pub const TRUE_BOUNDARY_CSV: &str = "true_boundary.csv";
pub const ESTIMATED_BOUNDARY_CSV: &str = "estimated_boundary.csv";
pub const HULL_CSV: &str = "hull.csv";

#[derive(Serialize)]
struct FailedRow<'a> {
    replication: usize,
    seed: u64,
    error: &'a str,
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    config: &'a ExperimentConfig,
    notes: Vec<String>,
    replications: usize,
    failed: usize,
    failures: Vec<FailedRow<'a>>,
    artifact_replication: Option<usize>,
    d_h: Summary,
    d_mu: Summary,
    sup_error: Summary,
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn flush(w: &mut csv::Writer<std::fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `replication, seed, d_H, d_mu, sup_error, seconds`.
pub fn write_results_csv(result: &ExperimentResult, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["replication", "seed", "d_H", "d_mu", "sup_error", "seconds"])?;
    for r in &result.rows {
        w.write_record([
            r.replication.to_string(),
            r.seed.to_string(),
            r.d_h.to_string(),
            r.d_mu.to_string(),
            r.sup_error.to_string(),
            r.seconds.to_string(),
        ])?;
    }
    flush(&mut w, path)
}

/// Point CSV with ambient coordinates, plus planar `u, v` when projecting.
pub fn write_points_csv(
    points: &[AmbientPoint],
    projection: Option<&StereographicProjection>,
    path: &Path,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    match projection {
        Some(_) => w.write_record(["x1", "x2", "x3", "u", "v"])?,
        None => w.write_record(["x1", "x2", "x3"])?,
    }
    for x in points {
        let mut row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        if let Some(p) = projection {
            let uv = p.project(x)?;
            row.push(uv[0].to_string());
            row.push(uv[1].to_string());
        }
        w.write_record(&row)?;
    }
    flush(&mut w, path)
}

/// Writes the sample, both boundaries and the hull of the artifact replication.
/// The hull file has only a header when no hull was computed.
pub fn emit_plot_data(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let projection = result.config.projection.as_ref();
    let empty = Vec::new();
    let (samples, true_b, est_b, hull) = match &result.artifacts {
        Some(a) => (
            &a.samples,
            &a.true_boundary,
            &a.estimated_boundary,
            a.hull.as_ref().unwrap_or(&empty),
        ),
        None => (&empty, &empty, &empty, &empty),
    };
    let mut written = Vec::new();
    for (name, pts) in [
        (SAMPLES_CSV, samples),
        (TRUE_BOUNDARY_CSV, true_b),
        (ESTIMATED_BOUNDARY_CSV, est_b),
        (HULL_CSV, hull),
    ] {
        let path = dir.join(name);
        write_points_csv(pts, projection, &path)?;
        written.push(path);
    }
    Ok(written)
}

/// Writes results, summary and plot data into `dir`.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let results = dir.join(RESULTS_CSV);
    write_results_csv(result, &results)?;
    let summary = SummaryFile {
        config: &result.config,
        notes: result.config.notes(),
        replications: result.rows.len(),
        failed: result.failed,
        failures: result
            .rows
            .iter()
            .filter_map(|r| {
                r.error.as_deref().map(|error| FailedRow {
                    replication: r.replication,
                    seed: r.seed,
                    error,
                })
            })
            .collect(),
        artifact_replication: result.artifacts.as_ref().map(|a| a.replication),
        d_h: result.d_h,
        d_mu: result.d_mu,
        sup_error: result.sup_error,
    };
    let summary_path = dir.join(SUMMARY_JSON);
    let text = serde_json::to_string_pretty(&summary)?;
    std::fs::write(&summary_path, text + "\n").map_err(|e| Error::io(&summary_path, e))?;
    let mut written = vec![results, summary_path];
    written.extend(emit_plot_data(result, dir)?);
    Ok(written)
}

/// Renders diagnostics one per line.
pub fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}
