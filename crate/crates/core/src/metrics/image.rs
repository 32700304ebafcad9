use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Raster, Result};

pub const SSIM_WINDOW: usize = 7;
pub const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
pub const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

fn check_same(a: &Raster, b: &Raster) -> Result<()> {
    if a.dimensions() != b.dimensions() || a.channels() != b.channels() {
        return Err(Error::DimensionMismatch {
            expected: a.dimensions(),
            actual: b.dimensions(),
        });
    }
    Ok(())
}

/// Mean squared difference over all pixels and channels.
pub fn mse(a: &Raster, b: &Raster) -> Result<f64> {
    check_same(a, b)?;
    let sum: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = f64::from(x) - f64::from(y);
            d * d
        })
        .sum();
    Ok(sum / a.pixels().len() as f64)
}

/// Root mean squared difference divided by the root mean square of the
/// reference `a`.
pub fn nrmse(a: &Raster, b: &Raster) -> Result<f64> {
    check_same(a, b)?;
    let to_f = |r: &Raster| r.pixels().iter().map(|&v| f64::from(v)).collect::<Vec<_>>();
    nrmse_values(&to_f(a), &to_f(b))
}

/// `mse` over equally long sample slices.
pub fn mse_values(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64
}

pub fn nrmse_values(a: &[f64], b: &[f64]) -> Result<f64> {
    let norm = a.iter().map(|v| v * v).sum::<f64>() / a.len() as f64;
    if !(norm > 0.0) {
        return Err(Error::EmptyReference);
    }
    Ok(libm::sqrt(mse_values(a, b)) / libm::sqrt(norm))
}

/// Mean SSIM over luminance.
pub fn ssim(a: &Raster, b: &Raster) -> Result<f64> {
    if a.dimensions() != b.dimensions() {
        return Err(Error::DimensionMismatch {
            expected: a.dimensions(),
            actual: b.dimensions(),
        });
    }
    ssim_plane(&a.luminance(), &b.luminance(), a.width(), a.height())
}

/// Mean local SSIM over every fully contained 7x7 window, with population
/// (divide by 49) window statistics.
pub fn ssim_plane(a: &[f64], b: &[f64], width: usize, height: usize) -> Result<f64> {
    let n = SSIM_WINDOW;
    if a.len() != width * height || b.len() != width * height {
        return Err(Error::InvalidBuffer("plane length != width * height"));
    }
    if width < n || height < n {
        return Err(Error::TooSmallForWindow(n));
    }
    let ow = width - n + 1;
    let oh = height - n + 1;

    // Horizontal window sums of a, b, a^2, b^2, ab for every row.
    let mut rows = vec![[0.0f64; 5]; ow * height];
    for y in 0..height {
        let (ra, rb) = (&a[y * width..(y + 1) * width], &b[y * width..(y + 1) * width]);
        for x in 0..ow {
            let mut s = [0.0; 5];
            for k in x..x + n {
                let (p, q) = (ra[k], rb[k]);
                s[0] += p;
                s[1] += q;
                s[2] += p * p;
                s[3] += q * q;
                s[4] += p * q;
            }
            rows[y * ow + x] = s;
        }
    }

    let inv = 1.0 / (n * n) as f64;
    let mut total = 0.0;
    for y in 0..oh {
        for x in 0..ow {
            let mut s = [0.0; 5];
            for k in y..y + n {
                let r = &rows[k * ow + x];
                for (acc, v) in s.iter_mut().zip(r) {
                    *acc += v;
                }
            }
            total += local_ssim(s.map(|v| v * inv));
        }
    }
    Ok(total / (ow * oh) as f64)
}

/// SSIM from window means `[E a, E b, E a^2, E b^2, E ab]`.
#[inline]
fn local_ssim(m: [f64; 5]) -> f64 {
    let (mu_a, mu_b) = (m[0], m[1]);
    let var_a = (m[2] - mu_a * mu_a).max(0.0);
    let var_b = (m[3] - mu_b * mu_b).max(0.0);
    let cov = m[4] - mu_a * mu_b;
    ((2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2))
        / ((mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2))
}
