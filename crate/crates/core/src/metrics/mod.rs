//! Image (SSIM, MSE, NRMSE) and text (Levenshtein, Jaro-Winkler, CER)
//! quality measures.

mod image;
mod text;

pub use image::{mse, mse_values, nrmse, nrmse_values, ssim, ssim_plane, SSIM_C1, SSIM_C2, SSIM_WINDOW};
pub use text::{cer, jaro, jaro_winkler, levenshtein, normalize_text};

use alloc::string::String;

use crate::remap::resize_bicubic;
use crate::{Raster, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeometryReport {
    pub ssim: f64,
    pub mse: f64,
    pub nrmse: f64,
    /// The dewarped image was resized to the reference dimensions first.
    pub resized: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TextReport {
    pub ld: usize,
    pub jw: f64,
    pub cer: f64,
    pub char_count_hyp: usize,
    pub char_count_ref: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Bicubic-resize the dewarped image to the reference size when they differ.
    pub resize_to_reference: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            resize_to_reference: true,
        }
    }
}

/// Geometry metrics on luminance; `reference` normalizes NRMSE.
pub fn evaluate_geometry(dewarped: &Raster, reference: &Raster, options: EvalOptions) -> Result<GeometryReport> {
    let resized = options.resize_to_reference && dewarped.dimensions() != reference.dimensions();
    let owned;
    let dewarped = if resized {
        owned = resize_bicubic(dewarped, reference.width(), reference.height())?;
        &owned
    } else {
        dewarped
    };
    if dewarped.dimensions() != reference.dimensions() {
        return Err(crate::Error::DimensionMismatch {
            expected: reference.dimensions(),
            actual: dewarped.dimensions(),
        });
    }
    let (a, b) = (reference.luminance(), dewarped.luminance());
    let (w, h) = reference.dimensions();
    Ok(GeometryReport {
        ssim: ssim_plane(&a, &b, w, h)?,
        mse: mse_values(&a, &b),
        nrmse: nrmse_values(&a, &b)?,
        resized,
    })
}

/// Text metrics after stripping all whitespace from both strings.
pub fn evaluate_text(hyp: &str, reference: &str) -> Result<TextReport> {
    let (h, r): (String, String) = (normalize_text(hyp), normalize_text(reference));
    Ok(TextReport {
        ld: levenshtein(&r, &h),
        jw: jaro_winkler(&r, &h),
        cer: cer(&r, &h)?,
        char_count_hyp: h.chars().count(),
        char_count_ref: r.chars().count(),
    })
}

pub fn evaluate_pair(
    dewarped: &Raster,
    reference: &Raster,
    hyp_text: &str,
    ref_text: &str,
    options: EvalOptions,
) -> Result<(GeometryReport, TextReport)> {
    Ok((evaluate_geometry(dewarped, reference, options)?, evaluate_text(hyp_text, ref_text)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn img(w: usize, h: usize, seed: usize) -> Raster {
        let px: Vec<u8> = (0..w * h * 3).map(|k| ((k * 131 + seed * 17) % 256) as u8).collect();
        Raster::new(w, h, 3, px).unwrap()
    }

    #[test]
    fn identical_inputs() {
        let a = img(20, 16, 1);
        let (g, t) = evaluate_pair(&a, &a, "the quick fox", "the quick fox", EvalOptions::default()).unwrap();
        assert!((g.ssim - 1.0).abs() < 1e-9);
        assert_eq!((g.mse, g.nrmse, g.resized), (0.0, 0.0, false));
        assert_eq!((t.ld, t.cer, t.jw), (0, 0.0, 1.0));
    }

    #[test]
    fn fields_equal_individual_metrics() {
        let (a, b) = (img(24, 20, 1), img(24, 20, 5));
        let g = evaluate_geometry(&b, &a, EvalOptions::default()).unwrap();
        let (la, lb) = (a.luminance(), b.luminance());
        assert_eq!(g.ssim, ssim_plane(&la, &lb, 24, 20).unwrap());
        assert_eq!(g.mse, mse_values(&la, &lb));
        assert_eq!(g.nrmse, nrmse_values(&la, &lb).unwrap());
    }

    #[test]
    fn whitespace_is_stripped() {
        let t = evaluate_text("ab c\td", "a b\ncd e").unwrap();
        assert_eq!((t.char_count_hyp, t.char_count_ref), (4, 5));
        assert_eq!(t.ld, levenshtein("abcde", "abcd"));
        assert!((t.cer - 0.2).abs() < 1e-12);
        assert!(evaluate_text("x", " \n").is_err());
    }

    #[test]
    fn size_mismatch_resizes_or_fails() {
        let (a, b) = (img(30, 20, 1), img(33, 22, 2));
        assert!(evaluate_geometry(&b, &a, EvalOptions::default()).unwrap().resized);
        assert!(evaluate_geometry(&b, &a, EvalOptions { resize_to_reference: false }).is_err());
    }
}
