use num_complex::Complex64;
use thiserror::Error;

/// Failure modes of expression evaluation and pole analysis.
#[derive(Debug, Clone, Error)]
pub enum ExprError {
    /// Evaluation hit a denominator that vanishes (to working precision)
    /// at the requested point.
    #[error("denominator vanishes at s = {at} (|den| = {den_mag:.3e})")]
    PoleHit { at: Complex64, den_mag: f64 },

    /// A residue was requested at a point where the function is regular.
    #[error("function is regular at s = {at}; nothing to take a residue of")]
    NotAZero { at: Complex64 },

    /// The pole is of order two or higher, outside the reach of the
    /// simple-pole residue rule. Use contour extraction instead.
    #[error("pole at s = {at} is not simple; use contour Laurent extraction")]
    HigherOrder { at: Complex64 },

    /// An argument-principle integral failed to converge to an integer,
    /// usually because a zero or pole sits on or very near the contour.
    #[error("winding number {value:.6} is not within {tol} of an integer; \
             a zero or pole may sit near the contour")]
    NonIntegerWinding { value: f64, tol: f64 },

    /// A quadrature loop exhausted its refinement budget.
    #[error("contour quadrature did not stabilize at {nodes} nodes (spread {spread:.3e})")]
    QuadratureStalled { nodes: usize, spread: f64 },

    /// Structurally invalid input (bad base, malformed JSON, empty sums).
    #[error("invalid expression: {0}")]
    Invalid(String),
}
