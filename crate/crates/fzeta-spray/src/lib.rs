//! Self-similar fractal sprays and a catalog of closed-form fractal zeta
//! functions.
//!
//! A spray tiles a region with scaled copies of one generator whose inner
//! tube volume is a plain polynomial up to the inradius. Summing the
//! generator's distance zeta over all copies turns the geometry into the
//! ratio `zeta_gen(s) / (1 - sum_j c_j r_j^s)`, so every pole is either an
//! integer pole of the generator or a zero of the scaling denominator, and
//! residues at those poles drive tube formulas downstream.
//!
//! The [`catalog`] module collects sets whose zeta functions (or at least
//! whose pole sets) are known exactly: Cantor-type sets and their products,
//! Sierpinski-type sprays in two and three dimensions, spheres, and square
//! variants with degenerate or partially unknown behavior. Stored residue
//! tables are plain analytic values, independent of the expression trees,
//! so tests can cross-check one against the other.

mod catalog;
mod divisor;
mod generator;
mod spray;

pub use catalog::{
    ball_volume, catalog_entries, catalog_get, CatalogEntry, CatalogParams, EntryKind,
};
pub use divisor::{Divisor, PeriodicPoles};
pub use generator::MonophaseGenerator;
pub use spray::{scaling_divisor, SelfSimilarSpray};

pub use fzeta_moran::Window;

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SprayError {
    /// The requested catalog name does not exist.
    #[error("catalog has no entry named {0:?}")]
    UnknownEntry(String),

    /// A parameter is outside the range the entry supports.
    #[error("{entry}: {reason}")]
    UnsupportedParams { entry: &'static str, reason: String },

    /// Minkowski sums of vertical pole progressions are exact only when the
    /// periods agree; mixing incommensurable periods would produce a dense
    /// sum set.
    #[error("pole progressions with periods {0} and {1} cannot be summed exactly")]
    IncommensurablePeriods(f64, f64),

    /// Structurally invalid spray data.
    #[error("invalid spray: {0}")]
    Invalid(String),

    /// A root search or lattice classification failed underneath.
    #[error(transparent)]
    Moran(#[from] fzeta_moran::MoranError),

    /// Expression evaluation failed (typically a sample point on a pole).
    #[error(transparent)]
    Expr(#[from] fzeta_expr::ExprError),
}
