//! Geometry core for camera-captured document dewarping.
//!
//! The crate is `no_std` and only needs an allocator. It takes an image and a
//! document probability mask and carries them through four stages:
//!
//! 1. [`mask`]: guided-filter refinement, Otsu binarization and selection of
//!    the largest connected region.
//! 2. [`contour`]: border following, Douglas-Peucker simplification, convex
//!    hull, corner selection and side segmentation.
//! 3. [`grid`]: arc-length resampling of the sides, linear interpolation of
//!    two curve families, Savitzky-Golay smoothing, cubic least-squares fits,
//!    extrapolation and intersection search through a k-d tree.
//! 4. [`remap`]: uniform target lattice, Catmull-Rom displacement field and
//!    bicubic backward remapping.
//!
//! [`metrics`] holds the image (SSIM, MSE, NRMSE) and text (Levenshtein,
//! Jaro-Winkler, CER) quality measures, and [`pipeline`] strings the stages
//! together. Everything touching files, clocks or threads lives in the
//! companion `dewarp` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod contour;
mod error;
pub mod geom;
pub mod grid;
mod linalg;
pub mod mask;
pub mod metrics;
pub mod pipeline;
pub mod raster;
pub mod remap;

pub use error::{Error, Result};
pub use geom::Point;
pub use raster::{BinaryMask, ProbabilityMask, Raster};
