//! Intermediate artifacts and the grid overlay.

use std::io::Write;
use std::path::Path;

use dewarp_core::pipeline::Dewarped;
use dewarp_core::{Point, Raster};
use serde::Serialize;

use crate::config::OutputFormat;
use crate::error::{CliError, Result};
use crate::formats::{encode_displacement, GridDump, OutlineDump};
use crate::io::{write_atomic, write_binary_mask, write_image};

pub const OUTLINE_FILE: &str = "outline.json";
pub const GRID_FILE: &str = "grid.json";
pub const OVERLAY_FILE: &str = "overlay.png";
pub const DISPLACEMENT_FILE: &str = "displacement.dwrp";
pub const DOCUMENT_MASK_FILE: &str = "document_mask.png";

type Rgb = [u8; 3];
const CONTOUR: Rgb = [230, 40, 40];
const HORIZONTAL: Rgb = [40, 200, 60];
const VERTICAL: Rgb = [40, 120, 230];
const NODE: Rgb = [250, 220, 0];
const COMPLETED_NODE: Rgb = [230, 0, 230];
const CORNER: Rgb = [255, 140, 0];

fn stamp(canvas: &mut Raster, p: Point, r: i64, color: Rgb) {
    if !p.is_finite() {
        return;
    }
    let (cx, cy) = (p.x.round() as i64, p.y.round() as i64);
    let (w, h) = (canvas.width() as i64, canvas.height() as i64);
    for y in (cy - r).max(0)..=(cy + r).min(h - 1) {
        for x in (cx - r).max(0)..=(cx + r).min(w - 1) {
            for (c, &v) in color.iter().enumerate() {
                canvas.set(x as usize, y as usize, c, v);
            }
        }
    }
}

fn draw_polyline(canvas: &mut Raster, points: &[Point], r: i64, color: Rgb) {
    for pair in points.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let steps = (a.dist(b).ceil() as usize).clamp(1, 1 << 16);
        for k in 0..=steps {
            stamp(canvas, a.lerp(b, k as f64 / steps as f64), r, color);
        }
    }
}

fn to_rgb(image: &Raster) -> Raster {
    if image.channels() == 3 {
        return image.clone();
    }
    let px = image.pixels().iter().flat_map(|&v| [v, v, v]).collect();
    Raster::new(image.width(), image.height(), 3, px).expect("gray to rgb keeps dimensions")
}

/// The input in RGB with the contour, both fitted line families, the grid
/// nodes (filled-in ones in magenta) and the four corners drawn on top.
pub fn render_overlay(image: &Raster, result: &Dewarped) -> Raster {
    let (w, h) = image.dimensions();
    let mut canvas = to_rgb(image);
    let r = (w.max(h) / 1200) as i64;
    let mut contour = result.outline.contour.points.clone();
    contour.extend(contour.first().copied());
    draw_polyline(&mut canvas, &contour, r, CONTOUR);
    for line in &result.grid.horizontal {
        draw_polyline(&mut canvas, &line.dense, r, HORIZONTAL);
    }
    for line in &result.grid.vertical {
        draw_polyline(&mut canvas, &line.dense, r, VERTICAL);
    }
    let grid = &result.grid.grid;
    for (p, &ok) in grid.nodes.iter().zip(&grid.valid) {
        stamp(&mut canvas, *p, 2 * r + 2, if ok { NODE } else { COMPLETED_NODE });
    }
    for &p in &result.outline.quad.corners {
        stamp(&mut canvas, p, 4 * r + 5, CORNER);
    }
    canvas
}

/// Overlay drawn from dumped files alone: contour, grid rows and columns
/// joined node to node, nodes and corners.
pub fn render_dumps(image: &Raster, outline: Option<&OutlineDump>, grid: &GridDump) -> Raster {
    let (w, h) = image.dimensions();
    let mut canvas = to_rgb(image);
    let r = (w.max(h) / 1200) as i64;
    let pt = |&[x, y]: &[f64; 2]| Point::new(x, y);
    if let Some(o) = outline {
        let mut contour: Vec<Point> = o.contour.iter().map(pt).collect();
        contour.extend(contour.first().copied());
        draw_polyline(&mut canvas, &contour, r, CONTOUR);
    }
    let nodes: Vec<Point> = grid.nodes.iter().map(pt).collect();
    if grid.cols > 0 && nodes.len() == grid.rows * grid.cols {
        for row in nodes.chunks_exact(grid.cols) {
            draw_polyline(&mut canvas, row, r, HORIZONTAL);
        }
        for j in 0..grid.cols {
            let col: Vec<Point> = (0..grid.rows).map(|i| nodes[i * grid.cols + j]).collect();
            draw_polyline(&mut canvas, &col, r, VERTICAL);
        }
    }
    for (k, p) in nodes.iter().enumerate() {
        let ok = grid.valid.get(k).copied().unwrap_or(true);
        stamp(&mut canvas, *p, 2 * r + 2, if ok { NODE } else { COMPLETED_NODE });
    }
    if let Some(o) = outline {
        for c in &o.corners {
            stamp(&mut canvas, pt(c), 4 * r + 5, CORNER);
        }
    }
    canvas
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, |w| {
        serde_json::to_writer(&mut *w, value).map_err(std::io::Error::other)?;
        w.write_all(b"\n")
    })
}

/// Writes outline, grid, overlay, displacement and document mask files
/// into `dir`.
pub fn dump_debug(dir: &Path, image: &Raster, result: &Dewarped) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    write_json(&dir.join(OUTLINE_FILE), &OutlineDump::new(&result.outline))?;
    write_json(&dir.join(GRID_FILE), &GridDump::from(&result.grid.grid))?;
    write_image(&dir.join(OVERLAY_FILE), &render_overlay(image, result), OutputFormat::Png)?;
    let bytes = encode_displacement(&result.remap.field);
    write_atomic(&dir.join(DISPLACEMENT_FILE), |w| w.write_all(&bytes))?;
    write_binary_mask(&dir.join(DOCUMENT_MASK_FILE), &result.mask.document)
}
