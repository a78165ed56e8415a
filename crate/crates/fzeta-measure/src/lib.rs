//! Empirical measurement of fractal tube volumes.
//!
//! Closed-form tube expansions predict how the volume of an
//! epsilon-neighborhood behaves as the width shrinks.  This crate produces
//! the same quantities without touching any closed form: sets are
//! rasterized cell by cell, an exact Euclidean distance transform turns
//! the raster into a distance field, and tube volumes, distance zeta
//! quadratures, box-dimension fits and Minkowski content estimates are
//! read straight off the field.  Agreement between the two routes is the
//! evidence that a predicted expansion describes geometry and not just
//! algebra.
//!
//! Every raster operation states its resolution floor: volumes are only
//! reported for widths of at least three cells, and generators refuse
//! grids beyond [`MAX_CELLS`] cells outright.

mod analyze;
mod distance;
mod grid;

pub use analyze::{
    aligned_window, average_content, content_summary, dimension_fit, string_content_summary,
    ContentSummary, DimensionFit,
};
pub use distance::{edt_squared, richardson, DistanceField};
pub use grid::{
    cantor_function, disk_drum, sierpinski_carpet, sierpinski_gasket, square_boundary,
    staircase_drum, Grid,
};

use fzeta_moran::MoranError;
use fzeta_strings::StringError;
use thiserror::Error;

/// Hard ceiling on raster size, cells per grid.
pub const MAX_CELLS: usize = 1 << 30;

/// Errors from rasterization and empirical measurement.
#[derive(Debug, Error)]
pub enum MeasureError {
    /// The requested grid would exceed [`MAX_CELLS`].
    #[error("raster of {cells} cells exceeds the {limit}-cell budget")]
    ResourceLimit { cells: usize, limit: usize },

    /// The requested width falls under the three-cell resolution floor,
    /// where counts are quantization rather than measurement.
    #[error("width {eps} is below the three-cell floor {floor}")]
    EpsilonTooSmall { eps: f64, floor: f64 },

    /// Structurally invalid input.
    #[error("invalid measurement request: {0}")]
    Invalid(String),

    #[error(transparent)]
    String(#[from] StringError),

    #[error(transparent)]
    Moran(#[from] MoranError),
}
