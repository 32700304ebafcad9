use alloc::vec;
use alloc::vec::Vec;

use super::kernel::catmull_rom_weights;
use crate::geom::polyline_length;
use crate::grid::WarpGrid;
use crate::{Error, Point, Result};

/// Evenly spaced lattice over the `width x height` output rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformGrid {
    pub rows: usize,
    pub cols: usize,
    pub width: usize,
    pub height: usize,
}

impl UniformGrid {
    pub fn new(rows: usize, cols: usize, width: usize, height: usize) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::InvalidParameter("uniform grid needs at least 2 rows and 2 columns"));
        }
        if width < 2 || height < 2 {
            return Err(Error::InvalidParameter("output must be at least 2x2 pixels"));
        }
        Ok(Self { rows, cols, width, height })
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> Point {
        Point::new(
            j as f64 * (self.width - 1) as f64 / (self.cols - 1) as f64,
            i as f64 * (self.height - 1) as f64 / (self.rows - 1) as f64,
        )
    }
}

/// Output size from the mean lengths of opposite boundary polylines of the
/// warp grid. A boundary of length `L` between pixel centres spans `L + 1`
/// pixels, so that is the extent used.
pub fn make_uniform_grid(warp: &WarpGrid) -> Result<UniformGrid> {
    let top = polyline_length(warp.row(0));
    let bottom = polyline_length(warp.row(warp.rows - 1));
    let left = polyline_length(&warp.column(0));
    let right = polyline_length(&warp.column(warp.cols - 1));
    if [top, bottom, left, right].iter().any(|&l| !(l > 0.0)) {
        return Err(Error::ZeroLength);
    }
    let width = libm::round(0.5 * (top + bottom)) as usize + 1;
    let height = libm::round(0.5 * (left + right)) as usize + 1;
    UniformGrid::new(warp.rows, warp.cols, width, height)
}

/// Source sampling coordinates for every output pixel. The displacement is
/// the difference between the source coordinate and the pixel position.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementField {
    pub width: usize,
    pub height: usize,
    /// Row-major `I_x`.
    pub source_x: Vec<f64>,
    /// Row-major `I_y`.
    pub source_y: Vec<f64>,
    /// The warp grid folds over itself; values were clamped to cell bounds.
    pub folded: bool,
}

impl DisplacementField {
    /// Field mapping every pixel onto itself.
    pub fn identity(width: usize, height: usize) -> Self {
        let mut source_x = Vec::with_capacity(width * height);
        let mut source_y = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                source_x.push(x as f64);
                source_y.push(y as f64);
            }
        }
        Self {
            width,
            height,
            source_x,
            source_y,
            folded: false,
        }
    }

    /// Field with a constant displacement.
    pub fn constant(width: usize, height: usize, dx: f64, dy: f64) -> Self {
        let mut f = Self::identity(width, height);
        f.source_x.iter_mut().for_each(|v| *v += dx);
        f.source_y.iter_mut().for_each(|v| *v += dy);
        f
    }

    #[inline]
    pub fn source(&self, x: usize, y: usize) -> Point {
        let k = y * self.width + x;
        Point::new(self.source_x[k], self.source_y[k])
    }

    #[inline]
    pub fn dx(&self, x: usize, y: usize) -> f64 {
        self.source_x[y * self.width + x] - x as f64
    }

    #[inline]
    pub fn dy(&self, x: usize, y: usize) -> f64 {
        self.source_y[y * self.width + x] - y as f64
    }

    /// `(dx, dy)` planes in single precision, row-major.
    pub fn displacement_planes(&self) -> (Vec<f32>, Vec<f32>) {
        let mut dx = Vec::with_capacity(self.source_x.len());
        let mut dy = Vec::with_capacity(self.source_y.len());
        for y in 0..self.height {
            for x in 0..self.width {
                dx.push(self.dx(x, y) as f32);
                dy.push(self.dy(x, y) as f32);
            }
        }
        (dx, dy)
    }
}

/// Catmull-Rom interpolation of warp node coordinates over the uniform
/// lattice. Nodes are padded by one ring of ghost nodes, extrapolated
/// quadratically (linearly for two-node axes), so border cells use the same
/// kernel and still reproduce quadratic maps.
#[derive(Debug, Clone)]
pub struct FieldEvaluator {
    uniform: UniformGrid,
    /// `(rows + 2) x (cols + 2)`, row-major.
    padded: Vec<Point>,
    /// Per-cell bounding box `(min, max)` used when the grid folds.
    cell_bounds: Option<Vec<(Point, Point)>>,
}

impl FieldEvaluator {
    pub fn new(warp: &WarpGrid, uniform: &UniformGrid) -> Result<Self> {
        if warp.rows != uniform.rows || warp.cols != uniform.cols {
            return Err(Error::CountMismatch(warp.rows * warp.cols, uniform.rows * uniform.cols));
        }
        if warp.nodes.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter("warp grid nodes must be finite"));
        }
        let (r, c) = (warp.rows, warp.cols);
        let pc = c + 2;
        let mut padded = vec![Point::default(); (r + 2) * pc];
        for i in 0..r {
            for j in 0..c {
                padded[(i + 1) * pc + j + 1] = warp.node(i, j);
            }
            let row = (i + 1) * pc;
            padded[row] = ghost(padded[row + 1], padded[row + 2], (c > 2).then(|| padded[row + 3]));
            padded[row + c + 1] = ghost(padded[row + c], padded[row + c - 1], (c > 2).then(|| padded[row + c - 2]));
        }
        for j in 0..pc {
            padded[j] = ghost(padded[pc + j], padded[2 * pc + j], (r > 2).then(|| padded[3 * pc + j]));
            padded[(r + 1) * pc + j] =
                ghost(padded[r * pc + j], padded[(r - 1) * pc + j], (r > 2).then(|| padded[(r - 2) * pc + j]));
        }

        let cell_bounds = (!warp.is_monotone()).then(|| {
            let mut bounds = Vec::with_capacity((r - 1) * (c - 1));
            for i in 0..r - 1 {
                for j in 0..c - 1 {
                    let q = [warp.node(i, j), warp.node(i, j + 1), warp.node(i + 1, j), warp.node(i + 1, j + 1)];
                    let lo = q.iter().fold(Point::new(f64::INFINITY, f64::INFINITY), |a, p| Point::new(a.x.min(p.x), a.y.min(p.y)));
                    let hi = q
                        .iter()
                        .fold(Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| Point::new(a.x.max(p.x), a.y.max(p.y)));
                    bounds.push((lo, hi));
                }
            }
            bounds
        });
        Ok(Self {
            uniform: *uniform,
            padded,
            cell_bounds,
        })
    }

    pub fn folded(&self) -> bool {
        self.cell_bounds.is_some()
    }

    /// Cell index and fractional offset of an output coordinate along an
    /// axis with `n` nodes spanning `extent` pixels.
    #[inline]
    fn locate(pos: f64, extent: usize, n: usize) -> (usize, f64) {
        let u = pos * (n - 1) as f64 / (extent - 1) as f64;
        let cell = (libm::floor(u).max(0.0) as usize).min(n - 2);
        (cell, u - cell as f64)
    }

    /// Interpolated source coordinate at any output position.
    pub fn eval(&self, x: f64, y: f64) -> Point {
        let mut column = vec![Point::default(); self.uniform.cols + 2];
        let (i, _) = self.column_values(y, &mut column);
        self.eval_in_row(x, i, &column)
    }

    /// Fills one output row of source coordinates.
    pub fn eval_row(&self, y: usize, out_x: &mut [f64], out_y: &mut [f64]) {
        let mut column = vec![Point::default(); self.uniform.cols + 2];
        let (i, _) = self.column_values(y as f64, &mut column);
        for (x, (ox, oy)) in out_x.iter_mut().zip(out_y.iter_mut()).enumerate() {
            let p = self.eval_in_row(x as f64, i, &column);
            *ox = p.x;
            *oy = p.y;
        }
    }

    /// Interpolates every padded column at row position `y`.
    fn column_values(&self, y: f64, column: &mut [Point]) -> (usize, f64) {
        let g = &self.uniform;
        let pc = g.cols + 2;
        let (i, t) = Self::locate(y, g.height, g.rows);
        let w = catmull_rom_weights(t);
        for (j, out) in column.iter_mut().enumerate() {
            // Padded rows i..i+4 are original rows i-1..i+2.
            let mut acc = Point::default();
            for (k, wk) in w.iter().enumerate() {
                acc = acc + self.padded[(i + k) * pc + j] * *wk;
            }
            *out = acc;
        }
        (i, t)
    }

    #[inline]
    fn eval_in_row(&self, x: f64, i: usize, column: &[Point]) -> Point {
        let g = &self.uniform;
        let (j, s) = Self::locate(x, g.width, g.cols);
        let w = catmull_rom_weights(s);
        let mut p = column[j] * w[0] + column[j + 1] * w[1] + column[j + 2] * w[2] + column[j + 3] * w[3];
        if let Some(bounds) = &self.cell_bounds {
            let (lo, hi) = bounds[i * (g.cols - 1) + j];
            p = Point::new(p.x.clamp(lo.x, hi.x), p.y.clamp(lo.y, hi.y));
        }
        p
    }
}

/// Node one step beyond `p0`, given its inward neighbours `p1` and `p2`.
#[inline]
fn ghost(p0: Point, p1: Point, p2: Option<Point>) -> Point {
    match p2 {
        Some(p2) => p0 * 3.0 - p1 * 3.0 + p2,
        None => p0 * 2.0 - p1,
    }
}

/// Dense source-coordinate field for the uniform output lattice. Warp nodes
/// are treated as samples of the backward map at the uniform nodes.
pub fn build_displacement_field(warp: &WarpGrid, uniform: &UniformGrid) -> Result<DisplacementField> {
    let eval = FieldEvaluator::new(warp, uniform)?;
    let (w, h) = (uniform.width, uniform.height);
    let mut source_x = vec![0.0; w * h];
    let mut source_y = vec![0.0; w * h];
    for (y, (rx, ry)) in source_x.chunks_exact_mut(w).zip(source_y.chunks_exact_mut(w)).enumerate() {
        eval.eval_row(y, rx, ry);
    }
    Ok(DisplacementField {
        width: w,
        height: h,
        source_x,
        source_y,
        folded: eval.folded(),
    })
}
