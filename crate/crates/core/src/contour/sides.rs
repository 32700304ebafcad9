//! Splitting the outline into four sides with the quadrilateral diagonals.

use alloc::vec::Vec;

use super::{Contour, CornerQuad};
use crate::geom::cross;
use crate::{Error, Point, Result};

/// Maximum distance between a detected corner and the closest contour point.
pub const CORNER_SNAP_TOLERANCE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Top = 0,
    Right = 1,
    Bottom = 2,
    Left = 3,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Top, Side::Right, Side::Bottom, Side::Left];

    pub fn name(self) -> &'static str {
        match self {
            Side::Top => "top",
            Side::Right => "right",
            Side::Bottom => "bottom",
            Side::Left => "left",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SideSet {
    /// Indexed by `Side as usize`. Each sequence runs in contour traversal
    /// order from its starting corner to its ending corner, both included.
    pub sides: [Vec<Point>; 4],
    /// Corners indexed by side: `corners[s]` starts side `s`.
    pub corners: [Point; 4],
    /// Side owning each contour point (corners included), parallel to the
    /// contour points.
    pub labels: Vec<Side>,
}

impl SideSet {
    pub fn side(&self, s: Side) -> &[Point] {
        &self.sides[s as usize]
    }

    /// The side oriented for grid construction: top and bottom left to
    /// right, left and right top to bottom.
    pub fn oriented(&self, s: Side) -> Vec<Point> {
        let mut pts = self.sides[s as usize].clone();
        // Counter-clockwise traversal runs top and right forwards, bottom
        // and left backwards.
        if matches!(s, Side::Bottom | Side::Left) {
            pts.reverse();
        }
        pts
    }
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Assigns every contour point to a side by the signs of its cross products
/// against the diagonals `c0-c2` and `c1-c3`. Points lying exactly on a
/// diagonal inherit the side of the previous contour point.
pub fn segment_sides(contour: &Contour, quad: &CornerQuad) -> Result<SideSet> {
    let pts = &contour.points;
    let n = pts.len();
    if n < 4 {
        return Err(Error::ContourTooSmall(n));
    }
    let c = quad.corners;

    // Contour index of each corner.
    let mut corner_idx = [0usize; 4];
    for (k, &corner) in c.iter().enumerate() {
        let (i, d2) = pts
            .iter()
            .enumerate()
            .map(|(i, p)| (i, p.dist_sq(corner)))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        if d2 > CORNER_SNAP_TOLERANCE * CORNER_SNAP_TOLERANCE {
            return Err(Error::CornerOffContour { x: corner.x, y: corner.y });
        }
        corner_idx[k] = i;
    }

    let key = |p: Point| (sign(cross(c[0], c[2], p)), sign(cross(c[1], c[3], p)));
    // Edge k joins c[k] and c[k+1]; its midpoint identifies its wedge.
    let edge_keys: [(i8, i8); 4] = core::array::from_fn(|k| key(c[k].midpoint(c[(k + 1) % 4])));
    if edge_keys.iter().any(|&(a, b)| a == 0 || b == 0) {
        return Err(Error::DegenerateGeometry("corner quadrilateral is not strictly convex"));
    }
    let classify = |p: Point| {
        let k = key(p);
        if k.0 == 0 || k.1 == 0 {
            return None;
        }
        edge_keys.iter().position(|&e| e == k)
    };

    // Start from a point with an unambiguous edge so the tie rule always has
    // a predecessor.
    let start = (0..n)
        .find(|&i| classify(pts[i]).is_some())
        .ok_or(Error::DegenerateGeometry("no contour point off the diagonals"))?;
    let mut edge_of = alloc::vec![0usize; n];
    let mut prev = classify(pts[start]).unwrap_or(0);
    for step in 0..n {
        let i = (start + step) % n;
        let e = classify(pts[i]).unwrap_or(prev);
        edge_of[i] = e;
        prev = e;
    }

    // The edge with the smallest mean y is the top; the rest follow the
    // traversal.
    let top_edge = (0..4)
        .min_by(|&a, &b| {
            let ya = c[a].y + c[(a + 1) % 4].y;
            let yb = c[b].y + c[(b + 1) % 4].y;
            ya.total_cmp(&yb)
        })
        .unwrap_or(0);
    let side_of_edge = |e: usize| Side::ALL[(e + 4 - top_edge) % 4];

    let mut sides: [Vec<Point>; 4] = Default::default();
    let mut corners = [Point::default(); 4];
    for e in 0..4 {
        let s = side_of_edge(e) as usize;
        let (from, to) = (corner_idx[e], corner_idx[(e + 1) % 4]);
        corners[s] = pts[from];
        let mut seq = Vec::new();
        seq.push(pts[from]);
        for step in 1..n {
            let i = (from + step) % n;
            if edge_of[i] == e && !corner_idx.contains(&i) {
                seq.push(pts[i]);
            }
        }
        seq.push(pts[to]);
        sides[s] = seq;
    }
    let labels = edge_of.into_iter().map(side_of_edge).collect();
    Ok(SideSet { sides, corners, labels })
}
