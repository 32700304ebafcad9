//! Reduction of a convex hull to the four document corners.

use alloc::vec::Vec;

use super::Contour;
use crate::geom::signed_area2;
use crate::{Error, Point, Result};

/// Hulls up to this size are reduced by trying every 4-subset.
const EXHAUSTIVE_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerQuad {
    /// Sorted by increasing angle about `centroid`, measured from the +y
    /// axis towards -x (the counter-clockwise sense of the contour).
    pub corners: [Point; 4],
    /// Mean of the hull vertices.
    pub centroid: Point,
}

impl CornerQuad {
    /// Angle of `p` about the centroid in `[0, 2pi)`.
    pub fn angle_of(&self, p: Point) -> f64 {
        angle_from_y_axis(self.centroid, p)
    }
}

fn angle_from_y_axis(center: Point, p: Point) -> f64 {
    let a = libm::atan2(-(p.x - center.x), p.y - center.y);
    if a < 0.0 {
        a + core::f64::consts::TAU
    } else {
        a
    }
}

/// Absolute area of the quadrilateral through four points taken in order.
pub fn quad_area(q: [Point; 4]) -> f64 {
    0.5 * signed_area2(&q).abs()
}

/// Indices (ascending, so in hull order) of the four vertices enclosing the
/// largest area. Exhaustive for small hulls; larger hulls start from evenly
/// spaced vertices and move one corner at a time until no move helps.
pub fn max_area_quad(hull: &[Point]) -> Result<[usize; 4]> {
    let n = hull.len();
    if n < 4 {
        return Err(Error::DegenerateGeometry("hull has fewer than four vertices"));
    }
    let area = |ix: [usize; 4]| quad_area(ix.map(|i| hull[i]));

    if n <= EXHAUSTIVE_LIMIT {
        let mut best = ([0, 1, 2, 3], -1.0);
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        let v = area([a, b, c, d]);
                        if v > best.1 {
                            best = ([a, b, c, d], v);
                        }
                    }
                }
            }
        }
        return Ok(best.0);
    }

    // Coordinate ascent gets stuck on symmetric hulls, so it is restarted
    // from every rotation of the evenly spaced seed.
    let mut best: Option<([usize; 4], f64)> = None;
    for shift in 0..n - 3 * n / 4 {
        let (ix, v) = refine_quad(hull, [shift, shift + n / 4, shift + n / 2, shift + 3 * n / 4]);
        if best.is_none_or(|b| v > b.1) {
            best = Some((ix, v));
        }
    }
    Ok(best.map_or([0, 1, 2, 3], |b| b.0))
}

/// Moves one corner at a time to the best position between its neighbours
/// until no single move increases the area.
fn refine_quad(hull: &[Point], start: [usize; 4]) -> ([usize; 4], f64) {
    let n = hull.len();
    let area = |ix: [usize; 4]| quad_area(ix.map(|i| hull[i]));
    let mut cur = start;
    let mut cur_area = area(cur);
    loop {
        let mut improved = false;
        for slot in 0..4 {
            let lo = if slot == 0 { 0 } else { cur[slot - 1] + 1 };
            let hi = if slot == 3 { n } else { cur[slot + 1] };
            for cand in lo..hi {
                if cand == cur[slot] {
                    continue;
                }
                let mut trial = cur;
                trial[slot] = cand;
                let v = area(trial);
                if v > cur_area {
                    cur = trial;
                    cur_area = v;
                    improved = true;
                }
            }
        }
        if !improved {
            return (cur, cur_area);
        }
    }
}

/// Chooses four hull vertices and sorts them about the hull centroid.
pub fn detect_corners(hull: &Contour) -> Result<CornerQuad> {
    let pts = &hull.points;
    let idx = max_area_quad(pts)?;
    let inv = 1.0 / pts.len() as f64;
    let centroid = pts.iter().fold(Point::default(), |acc, &p| acc + p * inv);
    let mut corners: Vec<Point> = idx.iter().map(|&i| pts[i]).collect();
    corners.sort_by(|&a, &b| {
        angle_from_y_axis(centroid, a)
            .total_cmp(&angle_from_y_axis(centroid, b))
            .then(a.dist_sq(centroid).total_cmp(&b.dist_sq(centroid)))
    });
    let corners = [corners[0], corners[1], corners[2], corners[3]];
    if quad_area(corners) == 0.0 {
        return Err(Error::DegenerateGeometry("corner quadrilateral has zero area"));
    }
    Ok(CornerQuad { corners, centroid })
}
