//! Stage 3: the distorted topological grid.
//!
//! Opposite sides are resampled to equal counts, linearly interpolated into
//! two curve families, smoothed, fitted with cubics, extrapolated and
//! intersected pairwise.

mod cubic;
mod intersect;
pub mod kdtree;
mod line;
mod savgol;

pub use cubic::{fit_cubic, fit_cubic_along, Axis, CubicPoly};
pub use intersect::{
    closest_sample_pair, complete_grid, find_intersections, find_intersections_with, refine_nodes, IndexedFamily,
    WarpGrid, MAX_INVALID_FRACTION,
};
pub use line::{extrapolate_line, interpolate_family, resample_side, Family, GridLine};
pub use savgol::{smooth_line, SavitzkyGolay, Smoothed};
pub(crate) use savgol::smooth_with;
