//! Closed-form expressions for fractal zeta functions.
//!
//! The grammar is deliberately tiny: complex constants, the variable `s`,
//! sums, products, quotients, and exponentials `b^s` with a positive base.
//! Every zeta function in this workspace that admits a closed form is built
//! from these pieces, which keeps evaluation, symbolic differentiation and
//! serialization total. Quotients are the one partial operation, and that is
//! the point: all the interesting analytic structure (complex dimensions,
//! residues, Laurent tails) lives at zeros of denominators.
//!
//! Three layers of analysis are provided, in increasing generality and cost:
//!
//! * [`residue_simple`] reads a residue off symbolically when the pole is a
//!   simple zero of a denominator,
//! * [`contour`] extracts winding numbers, pole orders, pole locations and
//!   Laurent coefficients from circle integrals and needs no structural
//!   assumptions,
//! * [`quad`] is a plain tanh-sinh integrator used by higher layers to check
//!   closed forms against direct integral definitions.

pub mod contour;
pub mod error;
pub mod expr;
pub mod quad;
pub mod residue;

pub use contour::{
    laurent_coeffs, pole_order, refine_pole_location, residue_contour, winding_number,
    ContourSpec,
};
pub use error::ExprError;
pub use expr::{Base, Expr};
pub use residue::residue_simple;

/// The scalar type of the whole workspace.
pub type C64 = num_complex::Complex64;
