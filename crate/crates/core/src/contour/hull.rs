use alloc::vec::Vec;

use super::Contour;
use crate::geom::cross;
use crate::{Error, Point, Result};

/// Convex hull by Andrew's monotone chain, O(N log N).
///
/// Vertices come out counter-clockwise (positive signed area), starting from
/// the lexicographically smallest point, with collinear points dropped.
pub fn convex_hull(points: &[Point]) -> Result<Contour> {
    let mut pts: Vec<Point> = points.to_vec();
    if pts.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidParameter("hull input must be finite"));
    }
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegenerateGeometry("fewer than three distinct points"));
    }

    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();

    if hull.len() < 3 {
        return Err(Error::DegenerateGeometry("all points are collinear"));
    }
    Ok(Contour::closed(hull))
}
