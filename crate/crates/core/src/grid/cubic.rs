//! Least-squares cubic fits of grid lines.

use alloc::vec::Vec;

use crate::linalg::{lstsq, solve_in_place};
use crate::{Error, Point, Result};

/// Which coordinate the cubic is a function of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// `y = f(x)`
    YOfX,
    /// `x = f(y)`
    XOfY,
}

impl Axis {
    #[inline]
    pub fn split(self, p: Point) -> (f64, f64) {
        match self {
            Axis::YOfX => (p.x, p.y),
            Axis::XOfY => (p.y, p.x),
        }
    }

    #[inline]
    pub fn join(self, independent: f64, dependent: f64) -> Point {
        match self {
            Axis::YOfX => Point::new(independent, dependent),
            Axis::XOfY => Point::new(dependent, independent),
        }
    }
}

/// `f(t) = a t^3 + b t^2 + c t + d` over the independent coordinate `t`.
///
/// `coefficients` is the monomial form `[a, b, c, d]`. Evaluation goes
/// through an equivalent form in the normalized variable
/// `(t - center) / scale`, which stays well conditioned for pixel-scale
/// abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicPoly {
    pub coefficients: [f64; 4],
    pub axis: Axis,
    pub domain: (f64, f64),
    /// Root mean square of the dependent-coordinate residuals.
    pub rms: f64,
    /// Fewer than four distinct abscissae: solved with a small ridge term.
    pub regularized: bool,
    center: f64,
    scale: f64,
    normalized: [f64; 4],
}

impl CubicPoly {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.scale;
        let [a, b, c, d] = self.normalized;
        ((a * u + b) * u + c) * u + d
    }

    #[inline]
    pub fn derivative(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.scale;
        let [a, b, c, _] = self.normalized;
        ((3.0 * a * u + 2.0 * b) * u + c) / self.scale
    }

    #[inline]
    pub fn point_at(&self, t: f64) -> Point {
        self.axis.join(t, self.eval(t))
    }

    /// Residual of `p` against the curve along the dependent coordinate.
    #[inline]
    pub fn residual(&self, p: Point) -> f64 {
        let (t, v) = self.axis.split(p);
        v - self.eval(t)
    }

    /// Sum of squared residuals of `samples` under arbitrary monomial
    /// coefficients, for optimality checks.
    pub fn sse_with(&self, coefficients: [f64; 4], samples: &[Point]) -> f64 {
        let [a, b, c, d] = coefficients;
        samples
            .iter()
            .map(|&p| {
                let (t, v) = self.axis.split(p);
                let r = v - (((a * t + b) * t + c) * t + d);
                r * r
            })
            .sum()
    }
}

/// Least-squares cubic through `samples`, with the wider-ranging coordinate
/// as the independent variable.
pub fn fit_cubic(samples: &[Point]) -> Result<CubicPoly> {
    if samples.len() < 4 {
        return Err(Error::InvalidParameter("cubic fit needs at least four samples"));
    }
    let range = |f: fn(&Point) -> f64| {
        samples
            .iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let xr = range(|p| p.x);
    let yr = range(|p| p.y);
    let axis = if xr.1 - xr.0 >= yr.1 - yr.0 { Axis::YOfX } else { Axis::XOfY };
    fit_cubic_along(samples, axis)
}

/// Least-squares cubic with a caller-chosen independent axis.
pub fn fit_cubic_along(samples: &[Point], axis: Axis) -> Result<CubicPoly> {
    let split: Vec<(f64, f64)> = samples.iter().map(|&p| axis.split(p)).collect();
    if split.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
        return Err(Error::InvalidParameter("cubic fit samples must be finite"));
    }
    let lo = split.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = split.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(Error::SingularFit);
    }
    let center = 0.5 * (lo + hi);
    let scale = 0.5 * (hi - lo);

    let rows = split.len();
    let mut design = Vec::with_capacity(rows * 4);
    let mut rhs = Vec::with_capacity(rows);
    for &(t, v) in &split {
        let u = (t - center) / scale;
        design.extend_from_slice(&[u * u * u, u * u, u, 1.0]);
        rhs.push(v);
    }

    let mut distinct: Vec<f64> = split.iter().map(|s| s.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();

    let (normalized, regularized) = match (distinct.len() >= 4).then(|| lstsq(&design, rows, 4, &rhs)).flatten() {
        Some(sol) => ([sol[0], sol[1], sol[2], sol[3]], false),
        None => (ridge_solve(&design, &rhs, rows)?, true),
    };

    let n = normalized;
    let rms = libm::sqrt(
        split
            .iter()
            .map(|&(t, v)| {
                let u = (t - center) / scale;
                let r = v - (((n[0] * u + n[1]) * u + n[2]) * u + n[3]);
                r * r
            })
            .sum::<f64>()
            / rows as f64,
    );

    Ok(CubicPoly {
        coefficients: to_monomial(normalized, center, scale),
        axis,
        domain: (lo, hi),
        rms,
        regularized,
        center,
        scale,
        normalized,
    })
}

/// Normal equations with a ridge term scaled to the Gram matrix.
fn ridge_solve(design: &[f64], rhs: &[f64], rows: usize) -> Result<[f64; 4]> {
    let mut gram = [0.0; 16];
    let mut aty = [0.0; 4];
    for r in 0..rows {
        let row = &design[r * 4..r * 4 + 4];
        for i in 0..4 {
            aty[i] += row[i] * rhs[r];
            for j in 0..4 {
                gram[i * 4 + j] += row[i] * row[j];
            }
        }
    }
    let trace = (0..4).map(|i| gram[i * 5]).sum::<f64>();
    let lambda = 1e-9 * trace.max(1e-300);
    for i in 0..4 {
        gram[i * 5] += lambda;
    }
    solve_in_place(&mut gram, &mut aty, 4).ok_or(Error::SingularFit)?;
    Ok(aty)
}

/// Expands `sum p_k ((t - m) / s)^k` (high degree first) into monomials of `t`.
fn to_monomial(normalized: [f64; 4], m: f64, s: f64) -> [f64; 4] {
    // q_k: coefficient of (t - m)^k, k = 0..=3.
    let q = [normalized[3], normalized[2] / s, normalized[1] / (s * s), normalized[0] / (s * s * s)];
    const BINOM: [[f64; 4]; 4] = [
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0],
        [1.0, 3.0, 3.0, 1.0],
    ];
    let mut raw = [0.0; 4]; // raw[j]: coefficient of t^j
    for (k, &qk) in q.iter().enumerate() {
        for (j, r) in raw.iter_mut().enumerate().take(k + 1) {
            *r += qk * BINOM[k][j] * libm::pow(-m, (k - j) as f64);
        }
    }
    [raw[3], raw[2], raw[1], raw[0]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Normal equations in the raw monomial basis, solved by elimination.
    fn normal_equations(samples: &[Point]) -> [f64; 4] {
        let mut ata = [0.0; 16];
        let mut aty = [0.0; 4];
        for p in samples {
            let row = [p.x * p.x * p.x, p.x * p.x, p.x, 1.0];
            for i in 0..4 {
                aty[i] += row[i] * p.y;
                for j in 0..4 {
                    ata[i * 4 + j] += row[i] * row[j];
                }
            }
        }
        solve_in_place(&mut ata, &mut aty, 4).unwrap();
        aty
    }

    #[test]
    fn recovers_exact_cubic() {
        let pts: Vec<Point> = (0..12)
            .map(|i| {
                let x = -3.0 + i as f64 * 0.5;
                Point::new(x, 2.0 * x * x * x - x + 5.0)
            })
            .collect();
        let f = fit_cubic_along(&pts, Axis::YOfX).unwrap();
        for (got, want) in f.coefficients.iter().zip([2.0, 0.0, -1.0, 5.0]) {
            assert!((got - want).abs() < 1e-9, "{:?}", f.coefficients);
        }
        assert!(f.rms < 1e-9);
    }

    #[test]
    fn nested_linear_model() {
        let pts: Vec<Point> = (0..9).map(|i| Point::new(i as f64, 3.0 * i as f64 + 1.0)).collect();
        // The y range is three times the x range, so the automatic choice
        // would fit x(y); pin the axis.
        let f = fit_cubic_along(&pts, Axis::YOfX).unwrap();
        for (got, want) in f.coefficients.iter().zip([0.0, 0.0, 3.0, 1.0]) {
            assert!((got - want).abs() < 1e-9);
        }
        assert_eq!(fit_cubic(&pts).unwrap().axis, Axis::XOfY);
    }

    #[test]
    fn noisy_fit_matches_normal_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let pts: Vec<Point> = (0..20)
            .map(|i| {
                let x = -2.0 + 4.0 * i as f64 / 19.0;
                Point::new(x, 0.5 * x * x * x - x * x + 2.0 + rng.random_range(-0.2..0.2))
            })
            .collect();
        let f = fit_cubic_along(&pts, Axis::YOfX).unwrap();
        let oracle = normal_equations(&pts);
        for (got, want) in f.coefficients.iter().zip(oracle) {
            assert!((got - want).abs() < 1e-8);
        }
        let oracle_rms = libm::sqrt(f.sse_with(oracle, &pts) / pts.len() as f64);
        assert!((f.rms - oracle_rms).abs() < 1e-8);
    }

    #[test]
    fn perturbing_coefficients_never_helps() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let pts: Vec<Point> = (0..30)
            .map(|i| {
                let x = i as f64 / 10.0;
                Point::new(x, libm::sin(3.0 * x) + rng.random_range(-0.1..0.1))
            })
            .collect();
        let f = fit_cubic_along(&pts, Axis::YOfX).unwrap();
        let base = f.sse_with(f.coefficients, &pts);
        for k in 0..4 {
            for delta in [-1e-3, 1e-3] {
                let mut c = f.coefficients;
                c[k] += delta;
                assert!(f.sse_with(c, &pts) >= base);
            }
        }
    }

    #[test]
    fn duplicate_abscissae_regularized() {
        let pts = vec![Point::new(0.0, 1.0), Point::new(0.0, 1.2), Point::new(5.0, 3.0), Point::new(5.0, 3.1), Point::new(10.0, 2.0)];
        let f = fit_cubic_along(&pts, Axis::YOfX).unwrap();
        assert!(f.regularized);
        assert!(f.coefficients.iter().all(|c| c.is_finite()));
    }

    #[test]
    fn identical_abscissae_error() {
        let pts: Vec<Point> = (0..5).map(|i| Point::new(2.0, i as f64)).collect();
        assert_eq!(fit_cubic_along(&pts, Axis::YOfX).unwrap_err(), Error::SingularFit);
        // The automatic axis choice sidesteps the vertical line.
        assert_eq!(fit_cubic(&pts).unwrap().axis, Axis::XOfY);
    }

    #[test]
    fn too_few_samples() {
        assert!(fit_cubic(&[Point::default(); 3]).is_err());
    }
}
