//! Guided filter (He et al.) over box-filtered local statistics, O(N) in the
//! pixel count regardless of the radius.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, ProbabilityMask, Raster, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidedFilterParams {
    pub radius: usize,
    /// Regularizer, in squared guide units (the guide is on the 0..=255 scale).
    pub epsilon: f64,
}

impl GuidedFilterParams {
    /// Radius of 1% of the smaller mask side (at least 1) and epsilon of
    /// half the radius.
    pub fn for_dimensions(width: usize, height: usize) -> Self {
        let radius = (libm::round(0.01 * width.min(height) as f64) as usize).max(1);
        Self {
            radius,
            epsilon: radius as f64 / 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radius < 1 {
            return Err(Error::InvalidParameter("guided filter radius must be >= 1"));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidParameter("guided filter epsilon must be > 0"));
        }
        Ok(())
    }
}

/// Refines `mask` using `guide` (luminance if it has three channels) with
/// [`GuidedFilterParams::for_dimensions`].
pub fn guided_filter(mask: &ProbabilityMask, guide: &Raster) -> Result<ProbabilityMask> {
    if mask.dimensions() != guide.dimensions() {
        return Err(Error::DimensionMismatch {
            expected: mask.dimensions(),
            actual: guide.dimensions(),
        });
    }
    let params = GuidedFilterParams::for_dimensions(mask.width(), mask.height());
    guided_filter_with(mask, &guide.luminance(), params)
}

/// Guided filter with an explicit single-channel guide and parameters.
/// Output values are clamped to `[0, 1]`.
pub fn guided_filter_with(
    mask: &ProbabilityMask,
    guide: &[f64],
    params: GuidedFilterParams,
) -> Result<ProbabilityMask> {
    params.validate()?;
    let (w, h) = mask.dimensions();
    let n = w * h;
    if guide.len() != n {
        return Err(Error::InvalidBuffer("guide length != mask pixel count"));
    }
    let r = params.radius;
    let p = mask.values();
    let mut tmp = vec![0.0; n];

    let mut mean_i = vec![0.0; n];
    box_mean(guide, w, h, r, &mut tmp, &mut mean_i);
    let mut mean_p = vec![0.0; n];
    let p64: Vec<f64> = p.iter().map(|&v| f64::from(v)).collect();
    box_mean(&p64, w, h, r, &mut tmp, &mut mean_p);

    // Products are staged in `prod` to keep peak memory at a few planes.
    let mut prod: Vec<f64> = guide.iter().zip(&p64).map(|(i, p)| i * p).collect();
    drop(p64);
    let mut a = vec![0.0; n];
    box_mean(&prod, w, h, r, &mut tmp, &mut a); // mean(I p)
    for (dst, &g) in prod.iter_mut().zip(guide) {
        *dst = g * g;
    }
    let mut b = vec![0.0; n];
    box_mean(&prod, w, h, r, &mut tmp, &mut b); // mean(I I)
    drop(prod);

    for k in 0..n {
        let var_i = (b[k] - mean_i[k] * mean_i[k]).max(0.0);
        let cov_ip = a[k] - mean_i[k] * mean_p[k];
        let ak = cov_ip / (var_i + params.epsilon);
        a[k] = ak;
        b[k] = mean_p[k] - ak * mean_i[k];
    }

    // mean_i / mean_p are free again: reuse them for the averaged coefficients.
    box_mean(&a, w, h, r, &mut tmp, &mut mean_i);
    box_mean(&b, w, h, r, &mut tmp, &mut mean_p);
    drop(a);
    drop(b);

    let values = (0..n)
        .map(|k| (mean_i[k] * guide[k] + mean_p[k]).clamp(0.0, 1.0) as f32)
        .collect();
    ProbabilityMask::new(w, h, values)
}

/// Mean over the `(2r+1) x (2r+1)` window clipped to the image, written to
/// `out`. `tmp` is scratch of the same length.
pub fn box_mean(src: &[f64], w: usize, h: usize, r: usize, tmp: &mut [f64], out: &mut [f64]) {
    debug_assert!(src.len() == w * h && tmp.len() == w * h && out.len() == w * h);

    // Horizontal running sums.
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        let dst = &mut tmp[y * w..(y + 1) * w];
        let mut acc: f64 = row[..(r + 1).min(w)].iter().sum();
        for x in 0..w {
            let lo = x.saturating_sub(r);
            let hi = (x + r).min(w - 1);
            dst[x] = acc / (hi - lo + 1) as f64;
            if x + r + 1 < w {
                acc += row[x + r + 1];
            }
            if x >= r {
                acc -= row[x - r];
            }
        }
    }

    // Vertical running sums, all columns at once.
    let mut acc = vec![0.0; w];
    for y in 0..(r + 1).min(h) {
        for (a, v) in acc.iter_mut().zip(&tmp[y * w..(y + 1) * w]) {
            *a += v;
        }
    }
    for y in 0..h {
        let lo = y.saturating_sub(r);
        let hi = (y + r).min(h - 1);
        let inv = 1.0 / (hi - lo + 1) as f64;
        for (o, a) in out[y * w..(y + 1) * w].iter_mut().zip(&acc) {
            *o = a * inv;
        }
        if y + r + 1 < h {
            let add = &tmp[(y + r + 1) * w..(y + r + 2) * w];
            for (a, v) in acc.iter_mut().zip(add) {
                *a += v;
            }
        }
        if y >= r {
            let sub = &tmp[(y - r) * w..(y - r + 1) * w];
            for (a, v) in acc.iter_mut().zip(sub) {
                *a -= v;
            }
        }
    }
}
