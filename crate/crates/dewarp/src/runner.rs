use std::path::{Path, PathBuf};
use std::time::Instant;

use dewarp_core::pipeline::{build_grid, outline, rectify, refine_mask, Dewarped, GeometryConfig, PipelineError, Stage, Warning};
use dewarp_core::{ProbabilityMask, Raster};
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::debug::dump_debug;
use crate::error::{CliError, Result};
use crate::io::{read_image, read_mask, write_image};

/// Milliseconds spent in each geometry stage.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StageTimings {
    pub mask_refinement_ms: f64,
    pub contour_ms: f64,
    pub grid_ms: f64,
    pub remap_ms: f64,
}

impl StageTimings {
    pub fn geometry_ms(&self) -> f64 {
        self.mask_refinement_ms + self.contour_ms + self.grid_ms + self.remap_ms
    }

    pub fn get(&self, stage: Stage) -> f64 {
        match stage {
            Stage::MaskRefinement => self.mask_refinement_ms,
            Stage::Contour => self.contour_ms,
            Stage::Grid => self.grid_ms,
            Stage::Remap => self.remap_ms,
        }
    }
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// [`dewarp_core::pipeline::dewarp`] with a clock around every stage.
pub fn dewarp_timed(image: &Raster, mask: &ProbabilityMask, config: &GeometryConfig) -> Result<(Dewarped, StageTimings), PipelineError> {
    let tag = |stage: Stage| move |source| PipelineError { stage, source };
    config.validate().map_err(tag(Stage::Grid))?;
    let mut t = StageTimings::default();

    let clock = Instant::now();
    let mask = refine_mask(mask, image).map_err(tag(Stage::MaskRefinement))?;
    t.mask_refinement_ms = ms_since(clock);

    let clock = Instant::now();
    let outline = outline(&mask.document, config).map_err(tag(Stage::Contour))?;
    t.contour_ms = ms_since(clock);

    let clock = Instant::now();
    let grid = build_grid(&outline.sides, image.width(), image.height(), config).map_err(tag(Stage::Grid))?;
    t.grid_ms = ms_since(clock);

    let clock = Instant::now();
    let remap = rectify(image, &grid.grid).map_err(tag(Stage::Remap))?;
    t.remap_ms = ms_since(clock);

    Ok((
        Dewarped {
            mask,
            outline,
            grid,
            remap,
        },
        t,
    ))
}

/// One image to dewarp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Job {
    pub image: PathBuf,
    pub mask: PathBuf,
    pub output: PathBuf,
}

impl Job {
    /// `<stem>_dewarped.<ext>` next to the image.
    pub fn default_output(image: &Path, config: &PipelineConfig) -> PathBuf {
        let stem = image.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "image".into());
        image.with_file_name(format!("{stem}_dewarped.{}", config.output_format.extension()))
    }

    /// `<output stem>_debug` next to the output.
    pub fn default_debug_dir(&self) -> PathBuf {
        let stem = self.output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        self.output.with_file_name(format!("{stem}_debug"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub image: PathBuf,
    pub mask: PathBuf,
    pub output: PathBuf,
    pub output_width: usize,
    pub output_height: usize,
    pub timings: StageTimings,
    /// Read, pipeline and write time.
    pub wall_ms: f64,
    pub warnings: Vec<Warning>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub debug_dir: Option<PathBuf>,
}

/// Reads, dewarps and writes one image. Nothing is written when any input
/// is missing or a stage fails.
pub fn dewarp_one(job: &Job, config: &PipelineConfig, debug_dir: Option<&Path>) -> Result<RunRecord> {
    let wall = Instant::now();
    for p in [&job.image, &job.mask] {
        if !p.is_file() {
            return Err(CliError::MissingInput(p.clone()));
        }
    }
    config.validate()?;
    let image = read_image(&job.image)?;
    let mask = read_mask(&job.mask)?;
    if mask.dimensions() != image.dimensions() {
        return Err(CliError::invalid(
            &job.mask,
            format!("mask is {:?}, image is {:?}", mask.dimensions(), image.dimensions()),
        ));
    }

    let (result, timings) = dewarp_timed(&image, &mask, &config.geometry)?;
    drop(mask);
    write_image(&job.output, result.output(), config.output_format)?;

    let debug_dir = match debug_dir {
        Some(d) => Some(d.to_path_buf()),
        None if config.dump_debug => Some(job.default_debug_dir()),
        None => None,
    };
    if let Some(dir) = &debug_dir {
        dump_debug(dir, &image, &result)?;
    }

    let (output_width, output_height) = result.output().dimensions();
    Ok(RunRecord {
        image: job.image.clone(),
        mask: job.mask.clone(),
        output: job.output.clone(),
        output_width,
        output_height,
        timings,
        wall_ms: ms_since(wall),
        warnings: result.warnings().cloned().collect(),
        debug_dir,
    })
}
