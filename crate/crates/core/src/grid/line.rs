use alloc::vec::Vec;

use super::CubicPoly;
use crate::{Error, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Interpolated between the top and bottom sides.
    Horizontal,
    /// Interpolated between the left and right sides.
    Vertical,
}

/// One interpolated curve of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct GridLine {
    pub family: Family,
    pub index: usize,
    pub lambda: f64,
    pub samples: Vec<Point>,
}

/// `n` points evenly spaced by arc length along `side`; the endpoints are
/// reproduced exactly.
pub fn resample_side(side: &[Point], n: usize) -> Result<Vec<Point>> {
    if side.len() < 2 {
        return Err(Error::InvalidParameter("side needs at least two points"));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("resample count must be >= 2"));
    }
    let mut cum = Vec::with_capacity(side.len());
    cum.push(0.0);
    for w in side.windows(2) {
        let last = *cum.last().unwrap_or(&0.0);
        cum.push(last + w[0].dist(w[1]));
    }
    let total = *cum.last().unwrap_or(&0.0);
    if !(total > 0.0) {
        return Err(Error::ZeroLength);
    }

    let mut out = Vec::with_capacity(n);
    out.push(side[0]);
    let mut seg = 0;
    for k in 1..n - 1 {
        let target = total * k as f64 / (n - 1) as f64;
        while seg + 2 < cum.len() && cum[seg + 1] < target {
            seg += 1;
        }
        let len = cum[seg + 1] - cum[seg];
        let t = if len > 0.0 { (target - cum[seg]) / len } else { 0.0 };
        out.push(side[seg].lerp(side[seg + 1], t));
    }
    out.push(side[side.len() - 1]);
    Ok(out)
}

/// `k` lines between two equally sampled sides; line `m` takes
/// `lambda = m / (k - 1)` and the samples `(1 - lambda) a_i + lambda b_i`.
pub fn interpolate_family(side_a: &[Point], side_b: &[Point], k: usize, family: Family) -> Result<Vec<GridLine>> {
    if side_a.len() != side_b.len() {
        return Err(Error::CountMismatch(side_a.len(), side_b.len()));
    }
    if k < 2 {
        return Err(Error::InvalidParameter("a family needs at least two lines"));
    }
    Ok((0..k)
        .map(|m| {
            let lambda = m as f64 / (k - 1) as f64;
            let samples = side_a
                .iter()
                .zip(side_b)
                .map(|(&a, &b)| match m {
                    0 => a,
                    _ if m == k - 1 => b,
                    _ => a.lerp(b, lambda),
                })
                .collect();
            GridLine {
                family,
                index: m,
                lambda,
                samples,
            }
        })
        .collect())
}

/// Dense samples of `poly` over its domain widened by `margin` times the
/// domain length on both ends, spaced at most one pixel apart.
pub fn extrapolate_line(poly: &CubicPoly, margin: f64) -> Result<Vec<Point>> {
    if !(margin >= 0.0) {
        return Err(Error::InvalidParameter("extrapolation margin must be >= 0"));
    }
    let (lo, hi) = poly.domain;
    let ext = margin * (hi - lo);
    let (start, end) = (lo - ext, hi + ext);
    let steps = libm::ceil(end - start).max(1.0) as usize;
    Ok((0..=steps)
        .map(|i| {
            let t = if i == steps { end } else { start + (end - start) * i as f64 / steps as f64 };
            poly.point_at(t)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{fit_cubic_along, Axis};
    use alloc::vec;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn straight_segment_resamples_uniformly() {
        let out = resample_side(&[p(0.0, 0.0), p(10.0, 0.0)], 6).unwrap();
        let xs: Vec<f64> = out.iter().map(|q| q.x).collect();
        for (got, want) in xs.iter().zip([0.0, 2.0, 4.0, 6.0, 8.0, 10.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn l_shape_resamples_by_arc_length() {
        let out = resample_side(&[p(0.0, 0.0), p(3.0, 0.0), p(3.0, 1.0)], 5).unwrap();
        let want = [p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0), p(3.0, 0.0), p(3.0, 1.0)];
        for (a, b) in out.iter().zip(want) {
            assert!(a.dist(b) < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn two_samples_are_the_endpoints() {
        let side = [p(1.0, 2.0), p(4.0, 6.0), p(5.0, 9.0)];
        assert_eq!(resample_side(&side, 2).unwrap(), vec![side[0], side[2]]);
    }

    #[test]
    fn zero_length_side_errors() {
        assert_eq!(resample_side(&[p(1.0, 1.0), p(1.0, 1.0)], 4).unwrap_err(), Error::ZeroLength);
    }

    #[test]
    fn family_endpoints_and_centreline() {
        let top: Vec<Point> = (0..5).map(|i| p(i as f64 / 4.0, 0.0)).collect();
        let bottom: Vec<Point> = (0..5).map(|i| p(i as f64 / 4.0, 1.0)).collect();
        let lines = interpolate_family(&top, &bottom, 3, Family::Horizontal).unwrap();
        assert_eq!(lines[0].samples, top);
        assert_eq!(lines[2].samples, bottom);
        assert!(lines[1].samples.iter().all(|q| q.y == 0.5));
        assert_eq!(lines[1].lambda, 0.5);
        assert!(matches!(
            interpolate_family(&top, &bottom[..4], 3, Family::Horizontal),
            Err(Error::CountMismatch(5, 4))
        ));
    }

    #[test]
    fn interpolated_samples_lie_between_correspondents() {
        let a: Vec<Point> = (0..8).map(|i| p(i as f64 * 3.0, libm::sin(i as f64))).collect();
        let b: Vec<Point> = (0..8).map(|i| p(i as f64 * 2.5 + 1.0, 20.0 + libm::cos(i as f64))).collect();
        for line in interpolate_family(&a, &b, 6, Family::Horizontal).unwrap() {
            for ((q, pa), pb) in line.samples.iter().zip(&a).zip(&b) {
                let d = pa.dist(*q) + q.dist(*pb) - pa.dist(*pb);
                assert!(d.abs() < 1e-9);
                if line.lambda > 0.0 && line.lambda < 1.0 {
                    assert!(q != pa && q != pb);
                }
            }
        }
    }

    #[test]
    fn extrapolation_spans_widened_domain() {
        let pts: Vec<Point> = (0..=10).map(|i| p(i as f64 * 10.0, 3.0 * i as f64 * 10.0 + 1.0)).collect();
        let poly = fit_cubic_along(&pts, Axis::YOfX).unwrap();
        let dense0 = extrapolate_line(&poly, 0.0).unwrap();
        assert_eq!(dense0.first().unwrap().x, 0.0);
        assert_eq!(dense0.last().unwrap().x, 100.0);
        let dense = extrapolate_line(&poly, 0.1).unwrap();
        assert!((dense.first().unwrap().x + 10.0).abs() < 1e-12);
        assert!((dense.last().unwrap().x - 110.0).abs() < 1e-12);
        assert!(dense.windows(2).all(|w| w[1].x - w[0].x <= 1.0 + 1e-12));
        // Still on y = 3x + 1.
        for q in &dense {
            assert!((q.y - (3.0 * q.x + 1.0)).abs() < 1e-9);
        }
    }
}
