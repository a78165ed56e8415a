//! Spectral counting for fractal strings.
//!
//! A fractal string, realized as a disjoint union of intervals with lengths
//! `l_j`, sounds the frequencies `n / l_j` for all positive integers `n`.
//! This crate computes the frequency counting function
//! `N(x) = sum_j floor(x l_j)` exactly, together with the asymptotics it
//! obeys: the leading Weyl term is the total length times `x`, and the
//! correction of order `x^D` is governed by the Minkowski content of the
//! string through a universal constant involving the Riemann zeta function
//! at the dimension.  For lattice strings the remainder on top of that
//! oscillates log-periodically, and the oscillation is available as an
//! explicit sum over the complex dimensions with zeta-weighted amplitudes.
//!
//! The Riemann zeta values themselves come from an Euler-Maclaurin
//! evaluator that covers the strip needed here and double-checks every
//! value against a refined cutoff before returning it.

mod counting;
mod zeta;

pub use counting::{
    frequency_count, frequency_count_folded, second_term_coefficient, spectral_oscillation,
    weyl_term, SpectralOscillation,
};
pub use zeta::riemann_zeta;

use fzeta_expr::ExprError;
use fzeta_moran::MoranError;
use fzeta_strings::StringError;
use num_complex::Complex64;
use thiserror::Error;

/// Errors from spectral counting and zeta evaluation.
#[derive(Debug, Error)]
pub enum SpectralError {
    /// The zeta evaluator only covers `Re s > -1` away from the pole at
    /// `s = 1`, with a cap on `|Im s|` to keep cutoffs affordable.
    #[error("zeta argument {s} outside the supported strip")]
    ZetaDomain { s: Complex64 },

    /// The two Euler-Maclaurin cutoffs disagreed, so the value cannot be
    /// trusted and is withheld.
    #[error("zeta evaluation at {s} failed its cutoff cross-check (spread {spread:.3e})")]
    ZetaUnstable { s: Complex64, spread: f64 },

    /// An oscillation sum was requested for a string whose scales are not
    /// powers of a common ratio.
    #[error("string is not lattice; its complex dimensions do not line up periodically")]
    NotLattice,

    /// The string carries no closed-form geometric zeta function to take
    /// residues of.
    #[error("string has no closed-form geometric zeta function")]
    NoClosedForm,

    /// Structurally invalid input.
    #[error("invalid spectral request: {0}")]
    Invalid(String),

    #[error(transparent)]
    String(#[from] StringError),

    #[error(transparent)]
    Moran(#[from] MoranError),

    #[error(transparent)]
    Expr(#[from] ExprError),
}
