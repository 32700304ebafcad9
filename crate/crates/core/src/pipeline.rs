//! The four stages strung together, with tunable parameters and
//! non-fatal diagnostics.

use alloc::vec::Vec;
use core::fmt;

use crate::contour::{
    convex_hull, detect_corners, extract_contour, segment_sides, simplify_contour, Contour, CornerQuad, Side, SideSet,
};
use crate::grid::{
    extrapolate_line, find_intersections_with, fit_cubic, interpolate_family, refine_nodes, resample_side, CubicPoly,
    Family, GridLine, IndexedFamily, SavitzkyGolay, WarpGrid,
};
use crate::mask::{guided_filter, otsu_binarize, select_largest_component, OtsuResult};
use crate::remap::{build_displacement_field, make_uniform_grid, remap_image, DisplacementField, UniformGrid};
use crate::{BinaryMask, Error, Point, ProbabilityMask, Raster, Result};

/// Geometry parameters. Counts and fractions not fixed by the method are
/// surfaced here so they can be tuned without code changes.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct GeometryConfig {
    /// Horizontal grid lines.
    pub grid_rows: usize,
    /// Vertical grid lines.
    pub grid_cols: usize,
    /// Douglas-Peucker tolerance as a fraction of the contour perimeter.
    pub dp_tolerance: f64,
    pub sg_window: usize,
    pub sg_order: usize,
    /// Extension of each fitted line beyond its domain, per end, as a
    /// fraction of the domain length.
    pub extrapolation_margin: f64,
    /// Closest-sample acceptance distance as a fraction of the larger image side.
    pub intersection_threshold_frac: f64,
    /// Points per side after arc-length resampling.
    pub side_samples: usize,
    /// Move each node onto the exact crossing of the two fitted cubics.
    pub refine_intersections: bool,
    /// Fit residual RMS (pixels) above which a warning is raised.
    pub max_fit_rms: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            grid_rows: 21,
            grid_cols: 21,
            dp_tolerance: 0.02,
            sg_window: 9,
            sg_order: 3,
            extrapolation_margin: 0.15,
            intersection_threshold_frac: 0.01,
            side_samples: 100,
            refine_intersections: true,
            max_fit_rms: 2.0,
        }
    }
}

impl GeometryConfig {
    pub fn validate(&self) -> Result<()> {
        let frac = |v: f64| v > 0.0 && v < 1.0;
        if self.grid_rows < 2 || self.grid_cols < 2 {
            return Err(Error::InvalidParameter("grid_rows and grid_cols must be >= 2"));
        }
        if self.sg_window % 2 == 0 || self.sg_window <= self.sg_order {
            return Err(Error::InvalidParameter("sg_window must be odd and greater than sg_order"));
        }
        if !frac(self.dp_tolerance) || !frac(self.extrapolation_margin) || !frac(self.intersection_threshold_frac) {
            return Err(Error::InvalidParameter(
                "dp_tolerance, extrapolation_margin and intersection_threshold_frac must lie in (0, 1)",
            ));
        }
        if self.side_samples < 4 {
            return Err(Error::InvalidParameter("side_samples must be >= 4"));
        }
        if !(self.max_fit_rms > 0.0) {
            return Err(Error::InvalidParameter("max_fit_rms must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Stage {
    MaskRefinement,
    Contour,
    Grid,
    Remap,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::MaskRefinement, Stage::Contour, Stage::Grid, Stage::Remap];

    pub fn name(self) -> &'static str {
        match self {
            Stage::MaskRefinement => "mask_refinement",
            Stage::Contour => "contour",
            Stage::Grid => "grid",
            Stage::Remap => "remap",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A stage error tagged with the stage that raised it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{stage} stage failed: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    pub source: Error,
}

/// Non-fatal conditions met on the way.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Warning {
    /// A line had fewer samples than the smoothing window and was not smoothed.
    SmoothingSkipped { family: LineFamily, index: usize },
    /// A line fit fell back to a regularized solve.
    RegularizedFit { family: LineFamily, index: usize },
    /// A line fit residual exceeded the configured bound.
    FitResidual { family: LineFamily, index: usize, rms: f64 },
    /// Intersections not found and filled from neighbours.
    CompletedNodes { count: usize },
    /// Nodes outside the image bounds inflated by 10%.
    NodesOutOfBounds { count: usize },
    /// The warp grid folds; the displacement field was clamped.
    FoldDetected,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::SmoothingSkipped { family, index } => write!(f, "{family} line {index}: too few samples to smooth"),
            Warning::RegularizedFit { family, index } => write!(f, "{family} line {index}: rank-deficient fit regularized"),
            Warning::FitResidual { family, index, rms } => {
                write!(f, "{family} line {index}: fit residual {rms:.2} px")
            }
            Warning::CompletedNodes { count } => write!(f, "{count} grid nodes filled from neighbours"),
            Warning::NodesOutOfBounds { count } => write!(f, "{count} grid nodes outside the image"),
            Warning::FoldDetected => f.write_str("warp grid folds over itself; displacement clamped"),
        }
    }
}

/// [`Family`] with serialization support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum LineFamily {
    Horizontal,
    Vertical,
}

impl From<Family> for LineFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Horizontal => LineFamily::Horizontal,
            Family::Vertical => LineFamily::Vertical,
        }
    }
}

impl fmt::Display for LineFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineFamily::Horizontal => "horizontal",
            LineFamily::Vertical => "vertical",
        })
    }
}

#[derive(Debug, Clone)]
pub struct MaskStage {
    pub otsu: OtsuResult,
    /// Largest connected region of the thresholded refined mask.
    pub document: BinaryMask,
}

/// Guided-filter refinement, Otsu thresholding, largest region.
pub fn refine_mask(mask: &ProbabilityMask, image: &Raster) -> Result<MaskStage> {
    let refined = guided_filter(mask, image)?;
    let (otsu, binary) = otsu_binarize(&refined)?;
    drop(refined);
    let document = select_largest_component(&binary)?;
    Ok(MaskStage { otsu, document })
}

#[derive(Debug, Clone)]
pub struct Outline {
    pub contour: Contour,
    pub simplified: Contour,
    pub hull: Contour,
    pub quad: CornerQuad,
    pub sides: SideSet,
}

/// Border trace, simplification, hull, corners and side segmentation.
pub fn outline(document: &BinaryMask, config: &GeometryConfig) -> Result<Outline> {
    let contour = extract_contour(document)?;
    let simplified = simplify_contour(&contour, config.dp_tolerance * contour.perimeter())?;
    let hull = convex_hull(&simplified.points)?;
    let quad = detect_corners(&hull)?;
    let sides = segment_sides(&contour, &quad)?;
    Ok(Outline {
        contour,
        simplified,
        hull,
        quad,
        sides,
    })
}

/// One grid line after smoothing, fitting and extrapolation.
#[derive(Debug, Clone)]
pub struct FittedLine {
    /// Interpolated then smoothed samples.
    pub line: GridLine,
    pub poly: CubicPoly,
    /// Dense samples over the extended domain.
    pub dense: Vec<Point>,
}

#[derive(Debug, Clone)]
pub struct GridStage {
    pub horizontal: Vec<FittedLine>,
    pub vertical: Vec<FittedLine>,
    pub grid: WarpGrid,
    pub warnings: Vec<Warning>,
}

fn smoothed_side(sides: &SideSet, s: Side, n: usize, filter: &SavitzkyGolay) -> Result<Vec<Point>> {
    let resampled = resample_side(&sides.oriented(s), n)?;
    Ok(crate::grid::smooth_with(filter, &resampled).points)
}

fn fit_family(
    a: &[Point],
    b: &[Point],
    k: usize,
    family: Family,
    filter: &SavitzkyGolay,
    config: &GeometryConfig,
    warnings: &mut Vec<Warning>,
) -> Result<Vec<FittedLine>> {
    interpolate_family(a, b, k, family)?
        .into_iter()
        .map(|mut line| {
            let smoothed = crate::grid::smooth_with(filter, &line.samples);
            let index = line.index;
            let fam = LineFamily::from(family);
            if smoothed.passthrough {
                warnings.push(Warning::SmoothingSkipped { family: fam, index });
            }
            line.samples = smoothed.points;
            let poly = fit_cubic(&line.samples)?;
            if poly.regularized {
                warnings.push(Warning::RegularizedFit { family: fam, index });
            }
            if poly.rms > config.max_fit_rms {
                warnings.push(Warning::FitResidual {
                    family: fam,
                    index,
                    rms: poly.rms,
                });
            }
            let dense = extrapolate_line(&poly, config.extrapolation_margin)?;
            Ok(FittedLine { line, poly, dense })
        })
        .collect()
}

/// Distorted grid from the four sides.
pub fn build_grid(sides: &SideSet, image_width: usize, image_height: usize, config: &GeometryConfig) -> Result<GridStage> {
    config.validate()?;
    let filter = SavitzkyGolay::new(config.sg_window, config.sg_order)?;
    let n = config.side_samples;
    let [top, right, bottom, left] = Side::ALL.map(|s| smoothed_side(sides, s, n, &filter));
    let (top, right, bottom, left) = (top?, right?, bottom?, left?);

    let mut warnings = Vec::new();
    let horizontal = fit_family(&top, &bottom, config.grid_rows, Family::Horizontal, &filter, config, &mut warnings)?;
    let vertical = fit_family(&left, &right, config.grid_cols, Family::Vertical, &filter, config, &mut warnings)?;

    let h_dense: Vec<&[Point]> = horizontal.iter().map(|l| l.dense.as_slice()).collect();
    let v_dense: Vec<&[Point]> = vertical.iter().map(|l| l.dense.as_slice()).collect();
    let mut grid = find_intersections_with(
        &h_dense,
        &v_dense,
        image_width,
        image_height,
        config.intersection_threshold_frac,
        IndexedFamily::Vertical,
    )?;
    if config.refine_intersections {
        let hp: Vec<CubicPoly> = horizontal.iter().map(|l| l.poly.clone()).collect();
        let vp: Vec<CubicPoly> = vertical.iter().map(|l| l.poly.clone()).collect();
        let max_shift = config.intersection_threshold_frac * image_width.max(image_height) as f64;
        refine_nodes(&mut grid, &hp, &vp, max_shift)?;
    }

    let completed = grid.invalid_count();
    if completed > 0 {
        warnings.push(Warning::CompletedNodes { count: completed });
    }
    let (mx, my) = (0.1 * image_width as f64, 0.1 * image_height as f64);
    let outside = grid
        .nodes
        .iter()
        .filter(|p| p.x < -mx || p.y < -my || p.x > image_width as f64 + mx || p.y > image_height as f64 + my)
        .count();
    if outside > 0 {
        warnings.push(Warning::NodesOutOfBounds { count: outside });
    }
    Ok(GridStage {
        horizontal,
        vertical,
        grid,
        warnings,
    })
}

#[derive(Debug, Clone)]
pub struct RemapStage {
    pub uniform: UniformGrid,
    pub field: DisplacementField,
    pub output: Raster,
    pub warnings: Vec<Warning>,
}

/// Uniform target lattice, displacement field and backward remap.
pub fn rectify(image: &Raster, grid: &WarpGrid) -> Result<RemapStage> {
    let uniform = make_uniform_grid(grid)?;
    let field = build_displacement_field(grid, &uniform)?;
    let output = remap_image(image, &field)?;
    let warnings = if field.folded { alloc::vec![Warning::FoldDetected] } else { Vec::new() };
    Ok(RemapStage {
        uniform,
        field,
        output,
        warnings,
    })
}

/// Everything the pipeline produced for one image.
#[derive(Debug, Clone)]
pub struct Dewarped {
    pub mask: MaskStage,
    pub outline: Outline,
    pub grid: GridStage,
    pub remap: RemapStage,
}

impl Dewarped {
    pub fn output(&self) -> &Raster {
        &self.remap.output
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Warning> {
        self.grid.warnings.iter().chain(&self.remap.warnings)
    }
}

/// Runs all stages. `mask` must match the image dimensions.
pub fn dewarp(image: &Raster, mask: &ProbabilityMask, config: &GeometryConfig) -> Result<Dewarped, PipelineError> {
    let tag = |stage: Stage| move |source: Error| PipelineError { stage, source };
    config.validate().map_err(tag(Stage::Grid))?;
    let mask = refine_mask(mask, image).map_err(tag(Stage::MaskRefinement))?;
    let outline = outline(&mask.document, config).map_err(tag(Stage::Contour))?;
    let grid = build_grid(&outline.sides, image.width(), image.height(), config).map_err(tag(Stage::Grid))?;
    let remap = rectify(image, &grid.grid).map_err(tag(Stage::Remap))?;
    Ok(Dewarped {
        mask,
        outline,
        grid,
        remap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Textured page occupying `[x0, x0 + w) x [y0, y0 + h)` on a dark canvas.
    fn flat_page(cw: usize, ch: usize, x0: usize, y0: usize, w: usize, h: usize) -> (Raster, ProbabilityMask) {
        let mut px = vec![20u8; cw * ch];
        let mut m = vec![0u8; cw * ch];
        for y in y0..y0 + h {
            for x in x0..x0 + w {
                let (u, v) = (x - x0, y - y0);
                px[y * cw + x] = if (u / 8 + v / 8) % 2 == 0 { 230 } else { 90 };
                m[y * cw + x] = 255;
            }
        }
        (Raster::new(cw, ch, 1, px).unwrap(), ProbabilityMask::from_levels(cw, ch, &m).unwrap())
    }

    #[test]
    fn defaults_validate() {
        GeometryConfig::default().validate().unwrap();
        let bad = GeometryConfig {
            sg_window: 8,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = GeometryConfig {
            dp_tolerance: 1.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn flat_page_round_trips_to_its_crop() {
        let (img, mask) = flat_page(240, 200, 30, 25, 160, 120);
        let out = dewarp(&img, &mask, &GeometryConfig::default()).unwrap();
        let r = out.output();
        assert_eq!(r.dimensions(), (160, 120));
        let crop = img.crop(30, 25, 160, 120).unwrap();
        let worst = r.pixels().iter().zip(crop.pixels()).map(|(&a, &b)| a.abs_diff(b)).max().unwrap();
        assert!(worst <= 1, "max deviation {worst}");
        assert!(out.grid.grid.is_monotone());
        assert_eq!(out.warnings().count(), 0);
    }

    #[test]
    fn stage_errors_are_tagged() {
        let img = Raster::filled(40, 40, 1, 0).unwrap();
        let empty = ProbabilityMask::new(40, 40, vec![0.0; 1600]).unwrap();
        let err = dewarp(&img, &empty, &GeometryConfig::default()).unwrap_err();
        assert_eq!(err.stage, Stage::MaskRefinement);
        let small = ProbabilityMask::new(20, 40, vec![0.0; 800]).unwrap();
        assert!(matches!(
            dewarp(&img, &small, &GeometryConfig::default()).unwrap_err().source,
            Error::DimensionMismatch { .. }
        ));
    }
}
