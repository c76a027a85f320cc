use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{HarnessError, SnapshotMetrics, SnapshotStatus};
use crate::solvers::SolverKind;

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.csv";

/// Means over the snapshots of one solver chain across all runs. Failed
/// snapshots are counted but excluded from the means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub solver: SolverKind,
    pub runs: usize,
    pub snapshots: usize,
    pub failed: usize,
    pub mean_uav_count: f64,
    pub mean_supported_fraction: f64,
    pub mean_relocation: f64,
    pub mean_objective: f64,
    pub mean_lp_calls: f64,
    pub mean_wall_time_s: f64,
}

fn solved(m: &SnapshotMetrics) -> bool {
    !matches!(m.status, SnapshotStatus::Infeasible | SnapshotStatus::ResourceLimit)
}

/// One row per solver present, in `milp`, `dmlp`, `static` order.
pub fn summarize(metrics: &[SnapshotMetrics]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for kind in [SolverKind::Milp, SolverKind::Dmlp, SolverKind::Static] {
        let all: Vec<&SnapshotMetrics> = metrics.iter().filter(|m| m.solver == kind).collect();
        if all.is_empty() {
            continue;
        }
        let mut seeds: Vec<u64> = all.iter().map(|m| m.run_seed).collect();
        seeds.sort_unstable();
        seeds.dedup();
        let ok: Vec<&&SnapshotMetrics> = all.iter().filter(|m| solved(m)).collect();
        let mean = |f: &dyn Fn(&SnapshotMetrics) -> f64| {
            if ok.is_empty() {
                f64::NAN
            } else {
                ok.iter().map(|m| f(m)).sum::<f64>() / ok.len() as f64
            }
        };
        rows.push(SummaryRow {
            solver: kind,
            runs: seeds.len(),
            snapshots: all.len(),
            failed: all.len() - ok.len(),
            mean_uav_count: mean(&|m| m.uav_count as f64),
            mean_supported_fraction: mean(&|m| m.supported_fraction),
            mean_relocation: mean(&|m| m.relocation),
            mean_objective: mean(&|m| m.objective),
            mean_lp_calls: mean(&|m| m.lp_calls as f64),
            mean_wall_time_s: mean(&|m| m.wall_time_s),
        });
    }
    rows
}

fn write_rows<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| HarnessError::Io(PathBuf::from("<csv>"), e))?;
    Ok(())
}

pub fn write_results_csv<W: Write>(metrics: &[SnapshotMetrics], out: W) -> Result<(), HarnessError> {
    write_rows(metrics, out)
}

pub fn write_summary_csv<W: Write>(summary: &[SummaryRow], out: W) -> Result<(), HarnessError> {
    write_rows(summary, out)
}

pub fn read_results_csv(path: impl AsRef<Path>) -> Result<Vec<SnapshotMetrics>, HarnessError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| HarnessError::Io(path.to_path_buf(), e))?;
    let mut r = csv::Reader::from_reader(file);
    Ok(r.deserialize().collect::<Result<Vec<SnapshotMetrics>, _>>()?)
}

fn create(path: &Path) -> Result<File, HarnessError> {
    File::create(path).map_err(|e| HarnessError::Io(path.to_path_buf(), e))
}

/// Writes `results.csv` and `summary.csv` into `outdir`, creating it.
pub fn report(metrics: &[SnapshotMetrics], outdir: impl AsRef<Path>) -> Result<Vec<SummaryRow>, HarnessError> {
    if metrics.is_empty() {
        return Err(HarnessError::Config("no metrics to report".into()));
    }
    let dir = outdir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io(dir.to_path_buf(), e))?;
    write_results_csv(metrics, create(&dir.join(RESULTS_FILE))?)?;
    let summary = summarize(metrics);
    write_summary_csv(&summary, create(&dir.join(SUMMARY_FILE))?)?;
    Ok(summary)
}
