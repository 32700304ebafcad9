//! Otsu's threshold over a 256-bin histogram of the mask values.

use alloc::vec::Vec;

use crate::{BinaryMask, Error, ProbabilityMask, Result};

pub const BINS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OtsuResult {
    /// Highest bin of the background class; foreground is every bin above.
    pub bin: usize,
    /// Upper edge of `bin` on the probability scale, `(bin + 1) / 256`.
    pub threshold: f64,
    pub omega0: f64,
    pub omega1: f64,
    pub var0: f64,
    pub var1: f64,
    pub within_class_variance: f64,
}

/// Bin index of a probability: bins have width 1/256.
#[inline]
pub fn quantize(v: f32) -> usize {
    ((v * BINS as f32) as usize).min(BINS - 1)
}

/// Bin centre on the probability scale.
#[inline]
fn bin_value(bin: usize) -> f64 {
    (bin as f64 + 0.5) / BINS as f64
}

pub fn histogram(mask: &ProbabilityMask) -> [u64; BINS] {
    let mut hist = [0u64; BINS];
    for &v in mask.values() {
        hist[quantize(v)] += 1;
    }
    hist
}

/// `omega0 var0 + omega1 var1` when splitting after `bin`, or `None` when one
/// class would be empty. Evaluated directly from the histogram.
pub fn within_class_variance(hist: &[u64; BINS], bin: usize) -> Option<OtsuResult> {
    let class_stats = |range: core::ops::Range<usize>| {
        let n: u64 = hist[range.clone()].iter().sum();
        if n == 0 {
            return None;
        }
        let mean = range.clone().map(|b| hist[b] as f64 * bin_value(b)).sum::<f64>() / n as f64;
        let var = range
            .map(|b| {
                let d = bin_value(b) - mean;
                hist[b] as f64 * d * d
            })
            .sum::<f64>()
            / n as f64;
        Some((n, var))
    };
    let (n0, var0) = class_stats(0..bin + 1)?;
    let (n1, var1) = class_stats(bin + 1..BINS)?;
    let total = (n0 + n1) as f64;
    let omega0 = n0 as f64 / total;
    let omega1 = n1 as f64 / total;
    Some(OtsuResult {
        bin,
        threshold: (bin + 1) as f64 / BINS as f64,
        omega0,
        omega1,
        var0,
        var1,
        within_class_variance: omega0 * var0 + omega1 * var1,
    })
}

/// Threshold minimizing the within-class variance (ties go to the smallest
/// bin) and the mask of pixels whose bin lies above it.
pub fn otsu_binarize(mask: &ProbabilityMask) -> Result<(OtsuResult, BinaryMask)> {
    let hist = histogram(mask);
    let occupied = hist.iter().filter(|&&c| c > 0).count();
    if occupied < 2 {
        return Err(Error::DegenerateMask);
    }

    // Cumulative sums of counts, first and second moments; the within-class
    // sum of squares is total_sq - s0^2/n0 - s1^2/n1.
    let mut n = 0u64;
    let mut s = 0.0f64;
    let mut sq = 0.0f64;
    let mut cum = Vec::with_capacity(BINS);
    for (b, &c) in hist.iter().enumerate() {
        n += c;
        s += c as f64 * bin_value(b);
        sq += c as f64 * bin_value(b) * bin_value(b);
        cum.push((n, s, sq));
    }
    let (total_n, total_s, total_sq) = cum[BINS - 1];

    let mut best: Option<(usize, f64)> = None;
    for (b, &(n0, s0, _)) in cum.iter().enumerate().take(BINS - 1) {
        let n1 = total_n - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let s1 = total_s - s0;
        let within = (total_sq - s0 * s0 / n0 as f64 - s1 * s1 / n1 as f64) / total_n as f64;
        if best.is_none_or(|(_, v)| within < v) {
            best = Some((b, within));
        }
    }
    let (bin, _) = best.ok_or(Error::DegenerateMask)?;
    let result = within_class_variance(&hist, bin).ok_or(Error::DegenerateMask)?;

    let bits = mask.values().iter().map(|&v| u8::from(quantize(v) > bin)).collect();
    let binary = BinaryMask::new(mask.width(), mask.height(), bits)?;
    Ok((result, binary))
}
