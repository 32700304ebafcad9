//! Stage 1 post-detection: turn a raw document probability mask into one
//! clean binary document region.

mod components;
mod guided;
mod otsu;

pub use components::select_largest_component;
pub use guided::{box_mean, guided_filter, guided_filter_with, GuidedFilterParams};
pub use otsu::{histogram, otsu_binarize, quantize, within_class_variance, OtsuResult, BINS};
