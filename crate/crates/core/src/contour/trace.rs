//! Outer border following in the manner of Suzuki and Abe: the border of the
//! first component in raster order is traced through its 8-neighbourhood.

use alloc::vec;
use alloc::vec::Vec;

use super::Contour;
use crate::{BinaryMask, Error, Point, Result};

/// Neighbour offsets in clockwise screen order (y grows downwards),
/// starting east.
const DIRS: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];
const WEST: usize = 4;

fn dir_index(from: (i64, i64), to: (i64, i64)) -> usize {
    let d = (to.0 - from.0, to.1 - from.1);
    DIRS.iter().position(|&o| o == d).expect("pixels are 8-adjacent")
}

/// Closed outer border of the mask's (single) foreground component, one
/// point per visited border pixel, oriented counter-clockwise (positive
/// signed area). Pixels on one-pixel-wide spurs are visited on the way out
/// and on the way back.
pub fn extract_contour(binary: &BinaryMask) -> Result<Contour> {
    let (w, _) = binary.dimensions();
    let first = binary.bits().iter().position(|&b| b != 0).ok_or(Error::EmptyMask)?;
    let start = ((first % w) as i64, (first / w) as i64);
    let on = |p: (i64, i64)| binary.get_signed(p.0, p.1);
    let step = |p: (i64, i64), d: usize| (p.0 + DIRS[d].0, p.1 + DIRS[d].1);

    // Clockwise search from the west neighbour (background: `start` is the
    // first foreground pixel in raster order).
    let first_found = (0..8).map(|k| (WEST + k) % 8).map(|d| step(start, d)).find(|&p| on(p));
    let Some(second) = first_found else {
        return Err(Error::ContourTooSmall(1));
    };

    let mut points: Vec<(i64, i64)> = vec![];
    let mut prev = second;
    let mut cur = start;
    loop {
        points.push(cur);
        // Counter-clockwise search starting just after `prev`.
        let back = dir_index(cur, prev);
        let next = (1..=8)
            .map(|k| (back + 8 - k) % 8)
            .map(|d| step(cur, d))
            .find(|&p| on(p))
            .expect("prev is foreground");
        if next == start && cur == second {
            break;
        }
        prev = cur;
        cur = next;
        if points.len() > 4 * binary.bits().len() + 16 {
            // Cannot happen for a finite mask; guards against a logic error.
            return Err(Error::DegenerateGeometry("border following did not terminate"));
        }
    }

    if points.len() < 3 {
        return Err(Error::ContourTooSmall(points.len()));
    }
    let mut contour = Contour::closed(points.into_iter().map(|(x, y)| Point::new(x as f64, y as f64)).collect());
    if contour.signed_area2() < 0.0 {
        contour.points.reverse();
    }
    Ok(contour)
}
