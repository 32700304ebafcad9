//! Pairwise intersections of the two curve families.

use alloc::vec::Vec;

use super::kdtree::KdTree;
use super::CubicPoly;
use crate::{Error, Point, Result};

/// Above this share of missing intersections the grid is rejected.
pub const MAX_INVALID_FRACTION: f64 = 0.10;

/// Distorted lattice: node `(i, j)` is where horizontal line `i` crosses
/// vertical line `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpGrid {
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub nodes: Vec<Point>,
    /// Whether the intersection was found (as opposed to filled in).
    pub valid: Vec<bool>,
}

impl WarpGrid {
    /// Grid with every node valid.
    pub fn from_nodes(rows: usize, cols: usize, nodes: Vec<Point>) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::InvalidParameter("grid needs at least 2 rows and 2 columns"));
        }
        if nodes.len() != rows * cols {
            return Err(Error::CountMismatch(nodes.len(), rows * cols));
        }
        Ok(Self {
            rows,
            cols,
            valid: alloc::vec![true; nodes.len()],
            nodes,
        })
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> Point {
        self.nodes[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Point] {
        &self.nodes[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Point> {
        (0..self.rows).map(|i| self.node(i, j)).collect()
    }

    pub fn invalid_count(&self) -> usize {
        self.valid.iter().filter(|v| !**v).count()
    }

    /// x increases along every row and y increases down every column.
    pub fn is_monotone(&self) -> bool {
        let rows_ok = (0..self.rows).all(|i| self.row(i).windows(2).all(|w| w[1].x > w[0].x));
        let cols_ok = (0..self.cols).all(|j| (1..self.rows).all(|i| self.node(i, j).y > self.node(i - 1, j).y));
        rows_ok && cols_ok
    }
}

/// Which family the k-d trees are built over; the other family queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexedFamily {
    Horizontal,
    #[default]
    Vertical,
}

/// Closest pair `(query index, tree index, squared distance)` between the
/// `query` samples and the tree. Ties keep the earliest query sample.
pub fn closest_sample_pair(query: &[Point], tree: &KdTree) -> Option<(usize, usize, f64)> {
    closest_pair_within(query, tree, f64::INFINITY)
}

/// [`closest_sample_pair`] restricted to pairs no farther apart than
/// `max_dist_sq` (squared).
fn closest_pair_within(query: &[Point], tree: &KdTree, max_dist_sq: f64) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for (qi, &q) in query.iter().enumerate() {
        let bound = best.map_or(max_dist_sq, |b| b.2);
        if let Some((ti, d)) = tree.nearest_within(q, bound) {
            if best.is_none_or(|b| d < b.2) {
                best = Some((qi, ti, d));
            }
        }
    }
    best
}

/// Axis-aligned bounding box `(min, max)`.
fn bounds(points: &[Point]) -> (Point, Point) {
    points.iter().fold(
        (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), p| (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y))),
    )
}

/// Intersections with the default threshold (1% of the larger image side)
/// and the k-d trees over the vertical family.
pub fn find_intersections<L: AsRef<[Point]>>(
    horizontal: &[L],
    vertical: &[L],
    image_width: usize,
    image_height: usize,
) -> Result<WarpGrid> {
    find_intersections_with(horizontal, vertical, image_width, image_height, 0.01, IndexedFamily::Vertical)
}

/// Each node is the midpoint of the closest pair of samples between a
/// horizontal and a vertical line, accepted when that pair is no farther
/// apart than `threshold_frac * max(width, height)`. Rejected nodes are
/// marked invalid and filled from their valid neighbours.
///
/// Only query samples within the threshold of the indexed line's bounding
/// box can form an accepted pair, so the tree is queried with those alone
/// and with the search radius capped at the threshold.
pub fn find_intersections_with<L: AsRef<[Point]>>(
    horizontal: &[L],
    vertical: &[L],
    image_width: usize,
    image_height: usize,
    threshold_frac: f64,
    indexed: IndexedFamily,
) -> Result<WarpGrid> {
    let (rows, cols) = (horizontal.len(), vertical.len());
    if rows < 2 || cols < 2 {
        return Err(Error::InvalidParameter("each family needs at least two lines"));
    }
    if !(threshold_frac > 0.0) {
        return Err(Error::InvalidParameter("intersection threshold must be > 0"));
    }
    let threshold = threshold_frac * image_width.max(image_height) as f64;
    let threshold_sq = threshold * threshold;

    let (indexed_lines, query_lines) = match indexed {
        IndexedFamily::Vertical => (vertical, horizontal),
        IndexedFamily::Horizontal => (horizontal, vertical),
    };
    let trees: Vec<KdTree> = indexed_lines.iter().map(|l| KdTree::build(l.as_ref())).collect();
    let boxes: Vec<(Point, Point)> = indexed_lines.iter().map(|l| bounds(l.as_ref())).collect();

    let mut nodes = alloc::vec![Point::default(); rows * cols];
    let mut valid = alloc::vec![false; rows * cols];
    let mut candidates = Vec::new();
    for (qi, line) in query_lines.iter().enumerate() {
        let line = line.as_ref();
        for (ti, tree) in trees.iter().enumerate() {
            let (i, j) = match indexed {
                IndexedFamily::Vertical => (qi, ti),
                IndexedFamily::Horizontal => (ti, qi),
            };
            let (lo, hi) = boxes[ti];
            candidates.clear();
            candidates.extend(line.iter().enumerate().filter(|(_, p)| {
                p.x >= lo.x - threshold && p.x <= hi.x + threshold && p.y >= lo.y - threshold && p.y <= hi.y + threshold
            }));
            let subset: Vec<Point> = candidates.iter().map(|&(_, &p)| p).collect();
            if let Some((a, b, _)) = closest_pair_within(&subset, tree, threshold_sq) {
                let k = i * cols + j;
                nodes[k] = subset[a].midpoint(indexed_lines[ti].as_ref()[b]);
                valid[k] = true;
            }
        }
    }

    let mut grid = WarpGrid { rows, cols, nodes, valid };
    let invalid = grid.invalid_count();
    if invalid as f64 > MAX_INVALID_FRACTION * (rows * cols) as f64 {
        return Err(Error::GridFailure {
            invalid,
            total: rows * cols,
        });
    }
    complete_grid(&mut grid);
    Ok(grid)
}

/// Fills invalid nodes from the nearest valid nodes left, right, above and
/// below: linear interpolation along the row and along the column, averaged.
/// Directions bracketed on both sides take precedence; a node with no
/// bracketing direction copies its nearest one-sided neighbours.
pub fn complete_grid(grid: &mut WarpGrid) {
    let (rows, cols) = (grid.rows, grid.cols);
    let snapshot = grid.clone();
    // (estimate, bracketed on both sides)
    let along = |positions: &[(usize, Point)], at: usize| -> Option<(Point, bool)> {
        let before = positions.iter().rev().find(|(k, _)| *k < at);
        let after = positions.iter().find(|(k, _)| *k > at);
        match (before, after) {
            (Some(&(k0, p0)), Some(&(k1, p1))) => Some((p0.lerp(p1, (at - k0) as f64 / (k1 - k0) as f64), true)),
            (Some(&(_, p)), None) | (None, Some(&(_, p))) => Some((p, false)),
            (None, None) => None,
        }
    };
    for i in 0..rows {
        for j in 0..cols {
            if snapshot.valid[i * cols + j] {
                continue;
            }
            let row: Vec<(usize, Point)> =
                (0..cols).filter(|&c| snapshot.valid[i * cols + c]).map(|c| (c, snapshot.node(i, c))).collect();
            let col: Vec<(usize, Point)> =
                (0..rows).filter(|&r| snapshot.valid[r * cols + j]).map(|r| (r, snapshot.node(r, j))).collect();
            let estimate = match (along(&row, j), along(&col, i)) {
                (Some((a, ta)), Some((b, tb))) if ta == tb => Some(a.midpoint(b)),
                (Some((a, true)), _) | (_, Some((a, true))) => Some(a),
                (Some((a, _)), None) | (None, Some((a, _))) => Some(a),
                _ => None,
            };
            if let Some(p) = estimate {
                grid.nodes[i * cols + j] = p;
            }
        }
    }
}

/// Newton refinement of valid nodes onto the exact crossing of the two fitted
/// cubics, starting from the sampled midpoint. A node keeps its sampled
/// position if the iteration does not converge within `max_shift` pixels.
pub fn refine_nodes(grid: &mut WarpGrid, horizontal: &[CubicPoly], vertical: &[CubicPoly], max_shift: f64) -> Result<()> {
    if horizontal.len() != grid.rows || vertical.len() != grid.cols {
        return Err(Error::CountMismatch(horizontal.len() * vertical.len(), grid.rows * grid.cols));
    }
    for i in 0..grid.rows {
        for j in 0..grid.cols {
            let k = i * grid.cols + j;
            if !grid.valid[k] {
                continue;
            }
            let start = grid.nodes[k];
            if let Some(p) = newton_crossing(&horizontal[i], &vertical[j], start) {
                if p.dist(start) <= max_shift {
                    grid.nodes[k] = p;
                }
            }
        }
    }
    Ok(())
}

/// Gradient of `residual` (dependent minus fitted value) with respect to `(x, y)`.
fn residual_gradient(poly: &CubicPoly, p: Point) -> (f64, f64) {
    match poly.axis {
        super::Axis::YOfX => (-poly.derivative(p.x), 1.0),
        super::Axis::XOfY => (1.0, -poly.derivative(p.y)),
    }
}

fn newton_crossing(h: &CubicPoly, v: &CubicPoly, start: Point) -> Option<Point> {
    let mut p = start;
    for _ in 0..32 {
        let (r1, r2) = (h.residual(p), v.residual(p));
        let (a, b) = residual_gradient(h, p);
        let (c, d) = residual_gradient(v, p);
        let det = a * d - b * c;
        if det.abs() < 1e-12 {
            return None;
        }
        let dx = (-r1 * d + b * r2) / det;
        let dy = (-a * r2 + c * r1) / det;
        p = Point::new(p.x + dx, p.y + dy);
        if !p.is_finite() {
            return None;
        }
        if dx * dx + dy * dy < 1e-24 {
            return Some(p);
        }
    }
    (h.residual(p).abs() < 1e-9 && v.residual(p).abs() < 1e-9).then_some(p)
}
