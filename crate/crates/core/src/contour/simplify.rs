//! Douglas-Peucker simplification.

use alloc::vec;
use alloc::vec::Vec;

use super::Contour;
use crate::geom::segment_distance;
use crate::{Error, Point, Result};

/// Marks the points kept by Douglas-Peucker on `points[lo..=hi]`. Iterative,
/// so arbitrarily long borders do not grow the call stack. The farthest
/// point is the first one attaining the maximum distance.
fn mark_kept(points: &[Point], lo: usize, hi: usize, tolerance: f64, keep: &mut [bool]) {
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        if b <= a + 1 {
            continue;
        }
        let mut far = a;
        let mut far_d = -1.0;
        for i in a + 1..b {
            let d = segment_distance(points[i], points[a], points[b]);
            if d > far_d {
                far_d = d;
                far = i;
            }
        }
        if far_d > tolerance {
            keep[far] = true;
            stack.push((far, b));
            stack.push((a, far));
        }
    }
}

/// Simplifies an open polyline; both endpoints are always retained.
pub fn simplify_polyline(points: &[Point], tolerance: f64) -> Result<Vec<Point>> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter("simplification tolerance must be > 0"));
    }
    if points.len() <= 2 {
        return Ok(points.to_vec());
    }
    let mut keep = vec![false; points.len()];
    keep[0] = true;
    keep[points.len() - 1] = true;
    mark_kept(points, 0, points.len() - 1, tolerance, &mut keep);
    Ok(points.iter().zip(&keep).filter(|(_, &k)| k).map(|(p, _)| *p).collect())
}

/// Simplifies a closed contour. The outline is split at two extreme points
/// (the point farthest from the centroid and the point farthest from that
/// one), each chain is simplified independently, and the kept points are
/// returned in their original order.
pub fn simplify_contour(contour: &Contour, tolerance: f64) -> Result<Contour> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter("simplification tolerance must be > 0"));
    }
    let pts = &contour.points;
    let n = pts.len();
    if n < 3 {
        return Err(Error::ContourTooSmall(n));
    }
    let inv = 1.0 / n as f64;
    let centroid = pts.iter().fold(Point::default(), |acc, &p| acc + p * inv);
    let farthest_from = |q: Point| {
        let mut best = (0usize, -1.0);
        for (i, p) in pts.iter().enumerate() {
            let d = p.dist_sq(q);
            if d > best.1 {
                best = (i, d);
            }
        }
        best.0
    };
    let a = farthest_from(centroid);
    let b = farthest_from(pts[a]);
    let (a, b) = (a.min(b), a.max(b));

    let mut keep = vec![false; n];
    keep[a] = true;
    keep[b] = true;
    if a != b {
        mark_kept(pts, a, b, tolerance, &mut keep);
    }
    // Wrap-around chain b -> a through the end of the sequence.
    let wrapped: Vec<Point> = pts[b..].iter().chain(&pts[..=a]).copied().collect();
    let mut keep_wrapped = vec![false; wrapped.len()];
    mark_kept(&wrapped, 0, wrapped.len() - 1, tolerance, &mut keep_wrapped);
    for (k, &kept) in keep_wrapped.iter().enumerate() {
        if kept {
            keep[(b + k) % n] = true;
        }
    }

    // A closed outline needs three vertices; keep the farthest point of the
    // chains if the tolerance swallowed everything else.
    if keep.iter().filter(|&&k| k).count() < 3 {
        let mut best = (None, -1.0);
        for (i, &p) in pts.iter().enumerate() {
            if keep[i] {
                continue;
            }
            let d = segment_distance(p, pts[a], pts[b]);
            if d > best.1 {
                best = (Some(i), d);
            }
        }
        if let (Some(i), _) = best {
            keep[i] = true;
        }
    }

    let points = pts.iter().zip(&keep).filter(|(_, &k)| k).map(|(p, _)| *p).collect();
    Ok(Contour::closed(points))
}
