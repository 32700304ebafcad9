use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the geometry core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },
    #[error("invalid buffer: {0}")]
    InvalidBuffer(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("empty mask: no foreground pixels")]
    EmptyMask,
    #[error("degenerate mask: a single intensity level, no foreground/background split")]
    DegenerateMask,
    #[error("contour too small: {0} points")]
    ContourTooSmall(usize),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),
    #[error("corner ({x:.1}, {y:.1}) is farther than the snap tolerance from the contour")]
    CornerOffContour { x: f64, y: f64 },
    #[error("polyline has zero length")]
    ZeroLength,
    #[error("point count mismatch: {0} vs {1}")]
    CountMismatch(usize, usize),
    #[error("cubic fit impossible: all abscissae identical")]
    SingularFit,
    #[error("grid failure: {invalid} of {total} intersections not found")]
    GridFailure { invalid: usize, total: usize },
    #[error("image smaller than the {0}x{0} window")]
    TooSmallForWindow(usize),
    #[error("empty reference text")]
    EmptyReference,
}
