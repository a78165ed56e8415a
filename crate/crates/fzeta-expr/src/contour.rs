//! Circle-contour extraction of analytic data.
//!
//! Everything here rides on one fact: the trapezoid rule on a periodic
//! analytic integrand converges geometrically, so a few hundred nodes on a
//! circle staying clear of singularities already give near machine accuracy.
//! Node counts are doubled until two successive passes agree, and failure to
//! stabilize is reported rather than papered over.

use num_complex::Complex64;

use crate::error::ExprError;
use crate::expr::{Expr, POLE_GUARD_REL};

/// A circle `|z - center| = radius` traversed once counterclockwise.
#[derive(Clone, Copy, Debug)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius: f64,
    /// Initial node count; extraction doubles it as needed.
    pub nodes: usize,
}

/// Hard ceiling on contour refinement, 2^18 nodes.
const MAX_NODES: usize = 1 << 18;

/// Agreement threshold between successive node doublings.
const STABILIZE_TOL: f64 = 1e-10;

impl ContourSpec {
    pub fn new(center: Complex64, radius: f64) -> Self {
        assert!(radius.is_finite() && radius > 0.0, "contour radius must be positive");
        ContourSpec { center, radius, nodes: 1024 }
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        assert!(nodes >= 8, "too few contour nodes");
        self.nodes = nodes;
        self
    }

    fn point(&self, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, theta)
    }
}

/// Trapezoid approximation of the contour integral of `f` over the circle.
pub fn circle_integral<F>(
    mut f: F,
    spec: &ContourSpec,
    nodes: usize,
) -> Result<Complex64, ExprError>
where
    F: FnMut(Complex64) -> Result<Complex64, ExprError>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let tangent = Complex64::from_polar(spec.radius, theta) * Complex64::new(0.0, 1.0);
        acc += f(spec.point(theta))? * tangent;
    }
    Ok(acc * 2.0 * std::f64::consts::PI / nodes as f64)
}

/// Evaluate `f'/f`, failing when `f` vanishes on the contour.
fn log_deriv(
    expr: &Expr,
    dexpr: &Expr,
    z: Complex64,
) -> Result<Complex64, ExprError> {
    let fv = expr.eval(z)?;
    let dv = dexpr.eval(z)?;
    if fv.norm() < POLE_GUARD_REL * (1.0 + dv.norm()) {
        return Err(ExprError::PoleHit { at: z, den_mag: fv.norm() });
    }
    Ok(dv / fv)
}

/// Argument-principle winding of `expr` around the contour:
/// zeros count with positive sign, poles with negative sign.
///
/// The raw integral value is returned after it has stabilized under node
/// doubling and landed within 0.25 of an integer; callers round it.
pub fn winding_number(expr: &Expr, spec: &ContourSpec) -> Result<f64, ExprError> {
    let dexpr = expr.deriv();
    let mut nodes = spec.nodes;
    let mut prev: Option<Complex64> = None;
    loop {
        let integral = circle_integral(|z| log_deriv(expr, &dexpr, z), spec, nodes)?;
        let w = integral / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        if let Some(p) = prev {
            let spread = (w - p).norm();
            if spread < 1e-9 * (1.0 + w.norm()) {
                let nearest = w.re.round();
                let dist = (w - Complex64::new(nearest, 0.0)).norm();
                if dist > 0.25 {
                    return Err(ExprError::NonIntegerWinding { value: w.re, tol: 0.25 });
                }
                return Ok(w.re);
            }
            if nodes >= MAX_NODES {
                return Err(ExprError::QuadratureStalled { nodes, spread });
            }
        }
        prev = Some(w);
        nodes *= 2;
    }
}

/// Order of the pole of `expr` at the center of the contour, assuming the
/// contour encloses exactly that one singularity. Positive for poles,
/// negative for zeros, zero when the function is regular and nonvanishing.
pub fn pole_order(expr: &Expr, spec: &ContourSpec) -> Result<i32, ExprError> {
    let w = winding_number(expr, spec)?;
    Ok(-(w.round() as i32))
}

/// Laurent coefficients `c_k` of `expr` about `center` for `k_min..=k_max`,
/// from Fourier analysis of the circle trace:
/// `c_k = (2 pi)^-1 r^-k  integral of f(center + r e^(i t)) e^(-i k t) dt`.
pub fn laurent_coeffs(
    expr: &Expr,
    center: Complex64,
    radius: f64,
    k_min: i32,
    k_max: i32,
) -> Result<Vec<Complex64>, ExprError> {
    assert!(k_min <= k_max, "empty Laurent index range");
    assert!(radius.is_finite() && radius > 0.0, "Laurent radius must be positive");
    let mut nodes = 256usize;
    let mut prev: Option<Vec<Complex64>> = None;
    loop {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (k_max - k_min + 1) as usize];
        for j in 0..nodes {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
            let z = center + Complex64::from_polar(radius, theta);
            let fv = expr.eval(z)?;
            for (idx, c) in coeffs.iter_mut().enumerate() {
                let k = k_min + idx as i32;
                *c += fv * Complex64::from_polar(1.0, -(k as f64) * theta);
            }
        }
        for (idx, c) in coeffs.iter_mut().enumerate() {
            let k = k_min + idx as i32;
            *c = *c / nodes as f64 * radius.powi(-k);
        }
        if let Some(p) = prev {
            let scale = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let spread = coeffs
                .iter()
                .zip(&p)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if spread < STABILIZE_TOL * scale {
                return Ok(coeffs);
            }
            if nodes >= MAX_NODES {
                return Err(ExprError::QuadratureStalled { nodes, spread });
            }
        }
        prev = Some(coeffs);
        nodes *= 2;
    }
}

/// Residue of `expr` at the contour center, with no assumption on the pole
/// order of anything else about the function's shape.
pub fn residue_contour(expr: &Expr, spec: &ContourSpec) -> Result<Complex64, ExprError> {
    Ok(laurent_coeffs(expr, spec.center, spec.radius, -1, -1)?[0])
}

/// Sharpen the location of the single zero or pole inside the contour using
/// the first moment of the argument principle:
/// `(2 pi i)^-1 contour-integral of s f'(s)/f(s) ds = n * location`,
/// where `n` is the net winding. Returns the location and `n`.
pub fn refine_pole_location(
    expr: &Expr,
    spec: &ContourSpec,
) -> Result<(Complex64, i32), ExprError> {
    let w = winding_number(expr, spec)?;
    let n = w.round() as i32;
    if n == 0 {
        return Err(ExprError::Invalid(
            "contour encloses no net zero or pole; cannot locate one".into(),
        ));
    }
    let dexpr = expr.deriv();
    let moment = circle_integral(
        |z| Ok(z * log_deriv(expr, &dexpr, z)?),
        spec,
        spec.nodes.max(2048),
    )? / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    Ok((moment / n as f64, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Base;

    fn cantor_zeta() -> Expr {
        Expr::div(
            Expr::real(1.0),
            Expr::add(vec![Expr::exp_base(Base::rational(3, 1)), Expr::real(-2.0)]),
        )
    }

    fn cantor_dim() -> f64 {
        (2.0f64).ln() / (3.0f64).ln()
    }

    #[test]
    fn winding_counts_simple_pole() {
        let z = cantor_zeta();
        let spec = ContourSpec::new(Complex64::new(cantor_dim(), 0.0), 0.2);
        let w = winding_number(&z, &spec).unwrap();
        assert!((w + 1.0).abs() < 1e-9, "w = {w}");
        assert_eq!(pole_order(&z, &spec).unwrap(), 1);
    }

    #[test]
    fn pole_order_two() {
        // 1 / (s - 1)^2
        let den = Expr::mul(vec![Expr::s_minus(1.0), Expr::s_minus(1.0)]);
        let f = Expr::div(Expr::real(1.0), den);
        let spec = ContourSpec::new(Complex64::new(1.0, 0.0), 0.3);
        assert_eq!(pole_order(&f, &spec).unwrap(), 2);
        let c = laurent_coeffs(&f, spec.center, spec.radius, -2, 0).unwrap();
        assert!((c[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(c[1].norm() < 1e-12);
        assert!(c[2].norm() < 1e-12);
    }

    #[test]
    fn contour_residue_matches_closed_form() {
        let z = cantor_zeta();
        let spec = ContourSpec::new(Complex64::new(cantor_dim(), 0.0), 0.2);
        let r = residue_contour(&z, &spec).unwrap();
        let expect = 1.0 / (2.0 * 3.0f64.ln());
        assert!((r - Complex64::new(expect, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_counts_positive() {
        // 3^s - 2 has a zero at the Cantor dimension.
        let f = Expr::add(vec![Expr::exp_base(Base::rational(3, 1)), Expr::real(-2.0)]);
        let spec = ContourSpec::new(Complex64::new(cantor_dim(), 0.0), 0.2);
        let w = winding_number(&f, &spec).unwrap();
        assert!((w - 1.0).abs() < 1e-9);
    }

    #[test]
    fn location_refinement_recenters() {
        let z = cantor_zeta();
        let d = cantor_dim();
        let spec = ContourSpec::new(Complex64::new(d + 0.05, -0.03), 0.2);
        let (loc, n) = refine_pole_location(&z, &spec).unwrap();
        assert_eq!(n, -1);
        assert!((loc - Complex64::new(d, 0.0)).norm() < 1e-11, "loc = {loc}");
    }

    #[test]
    fn analytic_function_has_zero_winding() {
        let f = Expr::exp_base(Base::rational(2, 1));
        let spec = ContourSpec::new(Complex64::new(0.3, 0.4), 0.5);
        assert_eq!(pole_order(&f, &spec).unwrap(), 0);
    }

    #[test]
    fn taylor_coefficients_of_exponential() {
        let f = Expr::exp_base(Base::rational(2, 1));
        let center = Complex64::new(0.5, 0.0);
        let c = laurent_coeffs(&f, center, 0.25, 0, 3).unwrap();
        let ln2 = 2.0f64.ln();
        let f0 = (center * ln2).exp();
        for (k, ck) in c.iter().enumerate() {
            let expect = f0 * ln2.powi(k as i32)
                / (1..=k).map(|j| j as f64).product::<f64>().max(1.0);
            assert!((ck - expect).norm() < 1e-12 * (1.0 + expect.norm()), "k = {k}");
        }
    }
}
