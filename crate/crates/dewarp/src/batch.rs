use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use dewarp_core::pipeline::Stage;
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::error::{exit, CliError, Result};
use crate::runner::{dewarp_one, Job, RunRecord};

pub const WORKERS_ENV: &str = "DEWARP_WORKERS";

/// Worker count: the explicit flag, else `DEWARP_WORKERS`, else the number
/// of available cores.
pub fn worker_count(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return if n == 0 { Err(CliError::BadArgs("--workers must be >= 1".into())) } else { Ok(n) };
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::BadArgs(format!("{WORKERS_ENV}={v} is not a positive integer"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Applies `f` to every item on up to `workers` threads. Results keep the
/// input order whatever the schedule.
pub fn parallel_map<T: Sync, R: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = workers.clamp(1, items.len().max(1));
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let r = f(item);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|r| r.expect("every item processed")).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BatchEntry {
    image: PathBuf,
    mask: PathBuf,
    output: PathBuf,
}

fn resolve(base: &Path, p: PathBuf) -> PathBuf {
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

fn read_manifest_text(path: &Path) -> Result<String> {
    if !path.is_file() {
        return Err(CliError::MissingInput(path.to_path_buf()));
    }
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Parses a JSON array of `{image, mask, output}`. Relative paths are
/// taken relative to the manifest's directory.
pub fn load_jobs(path: &Path) -> Result<Vec<Job>> {
    let text = read_manifest_text(path)?;
    let entries: Vec<BatchEntry> =
        serde_json::from_str(&text).map_err(|e| CliError::invalid(path, format!("manifest: {e}")))?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(entries
        .into_iter()
        .map(|e| Job {
            image: resolve(base, e.image),
            mask: resolve(base, e.mask),
            output: resolve(base, e.output),
        })
        .collect())
}

pub(crate) fn load_entries<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let text = read_manifest_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(path, format!("manifest: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    /// `None` for an empty sample. The median of an even count is the mean
    /// of the two middle values.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
        Some(Self {
            mean: v.iter().sum::<f64>() / n as f64,
            median,
            min: v[0],
            max: v[n - 1],
        })
    }
}

/// Timing aggregates over the successful records, in milliseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingSummary {
    pub count: usize,
    pub mask_refinement_ms: Stats,
    pub contour_ms: Stats,
    pub grid_ms: Stats,
    pub remap_ms: Stats,
    /// Sum of the four stages.
    pub geometry_ms: Stats,
    pub wall_ms: Stats,
}

impl TimingSummary {
    pub fn of(records: &[RunRecord]) -> Option<Self> {
        let col = |f: &dyn Fn(&RunRecord) -> f64| Stats::of(&records.iter().map(f).collect::<Vec<_>>());
        let stage = |s: Stage| col(&|r: &RunRecord| r.timings.get(s));
        Some(Self {
            count: records.len(),
            mask_refinement_ms: stage(Stage::MaskRefinement)?,
            contour_ms: stage(Stage::Contour)?,
            grid_ms: stage(Stage::Grid)?,
            remap_ms: stage(Stage::Remap)?,
            geometry_ms: col(&|r: &RunRecord| r.timings.geometry_ms())?,
            wall_ms: col(&|r: &RunRecord| r.wall_ms)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub image: PathBuf,
    pub mask: PathBuf,
    pub output: PathBuf,
    pub exit_code: u8,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunManifest {
    pub records: Vec<RunRecord>,
    pub failures: Vec<Failure>,
    pub summary: Option<TimingSummary>,
}

impl RunManifest {
    /// Success when nothing failed, the failure's own code when everything
    /// failed, and the partial-success code otherwise.
    pub fn exit_code(&self) -> u8 {
        match (self.records.len(), self.failures.first()) {
            (_, None) => exit::SUCCESS,
            (0, Some(f)) if self.failures.iter().all(|g| g.exit_code == f.exit_code) => f.exit_code,
            (0, Some(_)) => exit::INTERNAL,
            _ => exit::PARTIAL,
        }
    }
}

/// Runs every job, continuing past failures. Records keep manifest order.
pub fn run_batch(jobs: &[Job], config: &PipelineConfig, workers: usize) -> RunManifest {
    let results = parallel_map(jobs, workers, |job| dewarp_one(job, config, None));
    let mut manifest = RunManifest::default();
    for (job, r) in jobs.iter().zip(results) {
        match r {
            Ok(rec) => manifest.records.push(rec),
            Err(e) => manifest.failures.push(Failure {
                image: job.image.clone(),
                mask: job.mask.clone(),
                output: job.output.clone(),
                exit_code: e.exit_code(),
                error: e.to_string(),
            }),
        }
    }
    manifest.summary = TimingSummary::of(&manifest.records);
    manifest
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats() {
        assert_eq!(Stats::of(&[]), None);
        let s = Stats::of(&[4.0, 1.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.median, s.min, s.max), (8.0 / 3.0, 3.0, 1.0, 4.0));
        assert_eq!(Stats::of(&[4.0, 1.0, 3.0, 2.0]).unwrap().median, 2.5);
    }

    #[test]
    fn parallel_map_keeps_order() {
        let items: Vec<u64> = (0..257).collect();
        let want: Vec<u64> = items.iter().map(|v| v * v).collect();
        for w in [1, 2, 4, 16, 1000] {
            assert_eq!(parallel_map(&items, w, |v| v * v), want);
        }
        assert!(parallel_map(&[] as &[u8], 4, |v| *v).is_empty());
    }

    #[test]
    fn exit_codes() {
        let fail = |code| Failure {
            image: "a".into(),
            mask: "b".into(),
            output: "c".into(),
            exit_code: code,
            error: String::new(),
        };
        let mut m = RunManifest::default();
        assert_eq!(m.exit_code(), exit::SUCCESS);
        m.failures.push(fail(exit::MISSING_INPUT));
        assert_eq!(m.exit_code(), exit::MISSING_INPUT);
        m.failures.push(fail(exit::GRID_FAILURE));
        assert_eq!(m.exit_code(), exit::INTERNAL);
    }

    #[test]
    fn workers_flag_validation() {
        assert_eq!(worker_count(Some(3)).unwrap(), 3);
        assert!(worker_count(Some(0)).is_err());
    }
}
