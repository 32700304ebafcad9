use std::io::Write;
use std::path::{Path, PathBuf};

use dewarp_core::metrics::{evaluate_geometry, evaluate_text, EvalOptions, GeometryReport, TextReport, SSIM_C1, SSIM_C2, SSIM_WINDOW};
use serde::{Deserialize, Serialize};

use crate::batch::{load_entries, parallel_map};
use crate::error::{CliError, Result};
use crate::io::{read_image, write_atomic};

/// One evaluation pair. Text files are optional but come together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub dewarped: PathBuf,
    pub reference: PathBuf,
    #[serde(default)]
    pub hyp_text: Option<PathBuf>,
    #[serde(default)]
    pub ref_text: Option<PathBuf>,
}

/// Parses a JSON array of [`PairEntry`]; relative paths are taken relative
/// to the manifest's directory.
pub fn load_pairs(path: &Path) -> Result<Vec<PairEntry>> {
    let base = path.parent().unwrap_or(Path::new(""));
    let fix = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
    Ok(load_entries::<PairEntry>(path)?
        .into_iter()
        .map(|e| PairEntry {
            dewarped: fix(e.dewarped),
            reference: fix(e.reference),
            hyp_text: e.hyp_text.map(fix),
            ref_text: e.ref_text.map(fix),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub index: usize,
    pub dewarped: PathBuf,
    pub reference: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text: Option<TextReport>,
    /// Inputs that do not exist. A pair with any is excluded from the
    /// aggregate.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub missing: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl PairReport {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn evaluate_one(index: usize, pair: &PairEntry, options: EvalOptions) -> PairReport {
    let mut report = PairReport {
        index,
        dewarped: pair.dewarped.clone(),
        reference: pair.reference.clone(),
        geometry: None,
        text: None,
        missing: Vec::new(),
        error: None,
    };
    let listed = [Some(&pair.dewarped), Some(&pair.reference), pair.hyp_text.as_ref(), pair.ref_text.as_ref()];
    report.missing = listed.into_iter().flatten().filter(|p| !p.is_file()).cloned().collect();
    if !report.missing.is_empty() {
        report.error = Some("missing input".into());
        return report;
    }
    let run = || -> Result<(GeometryReport, Option<TextReport>)> {
        let geometry = evaluate_geometry(&read_image(&pair.dewarped)?, &read_image(&pair.reference)?, options)
            .map_err(|e| CliError::invalid(&pair.dewarped, e.to_string()))?;
        let text = match (&pair.hyp_text, &pair.ref_text) {
            (Some(h), Some(r)) => {
                Some(evaluate_text(&read_text(h)?, &read_text(r)?).map_err(|e| CliError::invalid(r, e.to_string()))?)
            }
            (None, None) => None,
            _ => return Err(CliError::BadArgs("hyp_text and ref_text must be given together".into())),
        };
        Ok((geometry, text))
    };
    match run() {
        Ok((g, t)) => {
            report.geometry = Some(g);
            report.text = t;
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

/// Per-metric values over the included pairs; text metrics only over pairs
/// that carry text.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricSummary {
    pub ssim: Option<f64>,
    pub mse: Option<f64>,
    pub nrmse: Option<f64>,
    pub ld: Option<f64>,
    pub jw: Option<f64>,
    pub cer: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub pairs: usize,
    pub evaluated: usize,
    pub excluded: usize,
    pub median: MetricSummary,
    pub mean: MetricSummary,
    pub ssim_window: usize,
    pub ssim_c1: f64,
    pub ssim_c2: f64,
    pub luminance: bool,
    pub resize_to_reference: bool,
}

fn median(v: &[f64]) -> Option<f64> {
    crate::batch::Stats::of(v).map(|s| s.median)
}

fn mean(v: &[f64]) -> Option<f64> {
    crate::batch::Stats::of(v).map(|s| s.mean)
}

pub fn aggregate(reports: &[PairReport], options: EvalOptions) -> Aggregate {
    let ok: Vec<&PairReport> = reports.iter().filter(|r| r.is_ok()).collect();
    let geo = |f: fn(&GeometryReport) -> f64| ok.iter().filter_map(|r| r.geometry.as_ref().map(f)).collect::<Vec<_>>();
    let txt = |f: fn(&TextReport) -> f64| ok.iter().filter_map(|r| r.text.as_ref().map(f)).collect::<Vec<_>>();
    let cols = [
        geo(|g| g.ssim),
        geo(|g| g.mse),
        geo(|g| g.nrmse),
        txt(|t| t.ld as f64),
        txt(|t| t.jw),
        txt(|t| t.cer),
    ];
    let summary = |f: fn(&[f64]) -> Option<f64>| MetricSummary {
        ssim: f(&cols[0]),
        mse: f(&cols[1]),
        nrmse: f(&cols[2]),
        ld: f(&cols[3]),
        jw: f(&cols[4]),
        cer: f(&cols[5]),
    };
    Aggregate {
        pairs: reports.len(),
        evaluated: ok.len(),
        excluded: reports.len() - ok.len(),
        median: summary(median),
        mean: summary(mean),
        ssim_window: SSIM_WINDOW,
        ssim_c1: SSIM_C1,
        ssim_c2: SSIM_C2,
        luminance: true,
        resize_to_reference: options.resize_to_reference,
    }
}

/// Evaluates every pair, continuing past missing or unreadable files.
pub fn evaluate_pairs(pairs: &[PairEntry], options: EvalOptions, workers: usize) -> (Vec<PairReport>, Aggregate) {
    let indexed: Vec<(usize, &PairEntry)> = pairs.iter().enumerate().collect();
    let reports = parallel_map(&indexed, workers, |&(i, p)| evaluate_one(i, p, options));
    let agg = aggregate(&reports, options);
    (reports, agg)
}

#[derive(Serialize)]
struct AggregateLine<'a> {
    aggregate: &'a Aggregate,
}

/// JSON lines: one object per pair, then `{"aggregate": ...}`.
pub fn write_report(path: &Path, reports: &[PairReport], aggregate: &Aggregate) -> Result<()> {
    write_atomic(path, |w| {
        for r in reports {
            serde_json::to_writer(&mut *w, r).map_err(std::io::Error::other)?;
            w.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut *w, &AggregateLine { aggregate }).map_err(std::io::Error::other)?;
        w.write_all(b"\n")
    })
}
