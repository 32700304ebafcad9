//! Savitzky-Golay smoothing of point sequences.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::solve_in_place;
use crate::{Error, Point, Result};

/// Convolution weights for every evaluation position inside one window, so
/// the ends of a sequence are smoothed by one-sided fits instead of being
/// dropped or padded.
#[derive(Debug, Clone)]
pub struct SavitzkyGolay {
    window: usize,
    order: usize,
    /// `weights[q][j]`: weight of window sample `j` when evaluating at `q`.
    weights: Vec<Vec<f64>>,
}

impl SavitzkyGolay {
    pub fn new(window: usize, order: usize) -> Result<Self> {
        if window % 2 == 0 {
            return Err(Error::InvalidParameter("Savitzky-Golay window must be odd"));
        }
        if window <= order {
            return Err(Error::InvalidParameter("Savitzky-Golay window must exceed the order"));
        }
        let half = (window / 2).max(1) as f64;
        let terms = order + 1;
        let t: Vec<f64> = (0..window).map(|j| (j as f64 - (window / 2) as f64) / half).collect();
        let powers = |x: f64| (0..terms).map(|k| libm::pow(x, k as f64)).collect::<Vec<_>>();
        let vander: Vec<Vec<f64>> = t.iter().map(|&x| powers(x)).collect();

        let mut gram = vec![0.0; terms * terms];
        for row in &vander {
            for i in 0..terms {
                for j in 0..terms {
                    gram[i * terms + j] += row[i] * row[j];
                }
            }
        }

        let mut weights = Vec::with_capacity(window);
        for &tq in &t {
            let mut z = powers(tq);
            let mut g = gram.clone();
            solve_in_place(&mut g, &mut z, terms)
                .ok_or(Error::InvalidParameter("Savitzky-Golay system is singular"))?;
            weights.push(vander.iter().map(|row| row.iter().zip(&z).map(|(a, b)| a * b).sum()).collect());
        }
        Ok(Self { window, order, weights })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Smooths one coordinate sequence. Requires `values.len() >= window`.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        let n = values.len();
        let w = self.window;
        let h = w / 2;
        debug_assert!(n >= w);
        (0..n)
            .map(|i| {
                let (start, pos) = if i < h {
                    (0, i)
                } else if i + h >= n {
                    (n - w, i - (n - w))
                } else {
                    (i - h, h)
                };
                self.weights[pos].iter().zip(&values[start..start + w]).map(|(c, v)| c * v).sum()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Smoothed {
    pub points: Vec<Point>,
    /// Too few samples for the window: returned unchanged.
    pub passthrough: bool,
}

/// Smooths both coordinates as functions of the sample index.
pub fn smooth_line(samples: &[Point], window: usize, order: usize) -> Result<Smoothed> {
    let filter = SavitzkyGolay::new(window, order)?;
    Ok(smooth_with(&filter, samples))
}

pub(crate) fn smooth_with(filter: &SavitzkyGolay, samples: &[Point]) -> Smoothed {
    if samples.len() < filter.window() {
        return Smoothed {
            points: samples.to_vec(),
            passthrough: true,
        };
    }
    let xs: Vec<f64> = samples.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = samples.iter().map(|p| p.y).collect();
    let points = filter
        .apply(&xs)
        .into_iter()
        .zip(filter.apply(&ys))
        .map(|(x, y)| Point::new(x, y))
        .collect();
    Smoothed {
        points,
        passthrough: false,
    }
}
