//! Stage 2: document outline, corners and the four sides.

mod corners;
mod hull;
mod sides;
mod simplify;
mod trace;

use alloc::vec::Vec;

use crate::geom::{polyline_length, signed_area2};
use crate::Point;

pub use corners::{detect_corners, max_area_quad, quad_area, CornerQuad};
pub use hull::convex_hull;
pub use sides::{segment_sides, Side, SideSet, CORNER_SNAP_TOLERANCE};
pub use simplify::{simplify_contour, simplify_polyline};
pub use trace::extract_contour;

/// Ordered sequence of outline points.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl Contour {
    pub fn closed(points: Vec<Point>) -> Self {
        Self { points, closed: true }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Polyline length, including the closing segment for closed contours.
    pub fn perimeter(&self) -> f64 {
        let open = polyline_length(&self.points);
        match (self.closed, self.points.first(), self.points.last()) {
            (true, Some(&a), Some(&b)) => open + a.dist(b),
            _ => open,
        }
    }

    /// Twice the signed enclosed area; positive for counter-clockwise order.
    pub fn signed_area2(&self) -> f64 {
        signed_area2(&self.points)
    }
}
