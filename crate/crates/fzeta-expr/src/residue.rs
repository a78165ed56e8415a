//! Symbolic residues at simple poles.
//!
//! When a pole comes from a simple zero of a concrete denominator the
//! residue is `num(w) / den'(w)` and no quadrature is needed. The walk below
//! classifies an expression at a point as either regular (with its value) or
//! a simple pole (with its residue), combining the two through sums,
//! products and quotients. Anything beyond a simple pole is refused and
//! should go through contour extraction instead.

use num_complex::Complex64;

use crate::error::ExprError;
use crate::expr::Expr;

/// Relative threshold for treating a denominator value as an exact zero.
///
/// Looser than the evaluation pole guard on purpose: callers pass pole
/// locations known to roughly machine precision, and the denominator is
/// then of order `|den'| * eps_machine * |w|`.
const ZERO_TOL: f64 = 1e-8;

enum Local {
    /// Regular point, carrying the value there.
    Regular(Complex64),
    /// Simple pole, carrying the residue.
    Pole(Complex64),
}

fn classify(expr: &Expr, w: Complex64) -> Result<Local, ExprError> {
    match expr {
        Expr::Const(c) => Ok(Local::Regular(*c)),
        Expr::Var => Ok(Local::Regular(w)),
        Expr::ExpBase(b) => Ok(Local::Regular((w * b.ln()).exp())),
        Expr::Add(terms) => {
            let mut value = Complex64::new(0.0, 0.0);
            let mut residue = Complex64::new(0.0, 0.0);
            let mut singular = false;
            for t in terms {
                match classify(t, w)? {
                    Local::Regular(v) => value += v,
                    Local::Pole(r) => {
                        singular = true;
                        residue += r;
                    }
                }
            }
            if singular {
                Ok(Local::Pole(residue))
            } else {
                Ok(Local::Regular(value))
            }
        }
        Expr::Mul(factors) => {
            let mut value = Complex64::new(1.0, 0.0);
            let mut residue: Option<Complex64> = None;
            for f in factors {
                match classify(f, w)? {
                    Local::Regular(v) => value *= v,
                    Local::Pole(r) => {
                        if residue.is_some() {
                            return Err(ExprError::HigherOrder { at: w });
                        }
                        residue = Some(r);
                    }
                }
            }
            match residue {
                // A factor vanishing at w could cancel the pole; that
                // cancellation is exactly multiplication of the residue by
                // the (zero) value of the regular part, so it is covered.
                Some(r) => Ok(Local::Pole(r * value)),
                None => Ok(Local::Regular(value)),
            }
        }
        Expr::Div(num, den) => {
            let d = classify(den, w)?;
            let n = classify(num, w)?;
            match (n, d) {
                (Local::Regular(nv), Local::Regular(dv)) => {
                    let scale = 1.0 + deriv_magnitude(den, w);
                    if dv.norm() <= ZERO_TOL * scale {
                        let dprime = den.deriv().eval(w)?;
                        if dprime.norm() <= ZERO_TOL * scale {
                            return Err(ExprError::HigherOrder { at: w });
                        }
                        Ok(Local::Pole(nv / dprime))
                    } else {
                        Ok(Local::Regular(nv / dv))
                    }
                }
                (Local::Pole(nr), Local::Regular(dv)) => {
                    let scale = 1.0 + deriv_magnitude(den, w);
                    if dv.norm() <= ZERO_TOL * scale {
                        // Pole over a vanishing denominator is at least
                        // order two.
                        return Err(ExprError::HigherOrder { at: w });
                    }
                    Ok(Local::Pole(nr / dv))
                }
                // A pole downstairs makes the quotient vanish at w.
                (Local::Regular(_), Local::Pole(_)) => Ok(Local::Regular(Complex64::new(0.0, 0.0))),
                (Local::Pole(_), Local::Pole(_)) => Err(ExprError::HigherOrder { at: w }),
            }
        }
    }
}

fn deriv_magnitude(expr: &Expr, w: Complex64) -> f64 {
    expr.deriv().eval(w).map(|v| v.norm()).unwrap_or(0.0)
}

/// Residue of `expr` at `w`, where `w` must be a simple pole arising from a
/// simple zero of some denominator in the tree.
///
/// Returns [`ExprError::NotAZero`] when the expression is regular at `w` and
/// [`ExprError::HigherOrder`] when the singularity is not simple.
pub fn residue_simple(expr: &Expr, w: Complex64) -> Result<Complex64, ExprError> {
    match classify(expr, w)? {
        Local::Pole(r) => Ok(r),
        Local::Regular(_) => Err(ExprError::NotAZero { at: w }),
    }
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

    #[test]
    fn cantor_residue_at_real_dimension() {
        let d = (2.0f64).ln() / (3.0f64).ln();
        let r = residue_simple(&cantor_zeta(), Complex64::new(d, 0.0)).unwrap();
        let expect = 1.0 / (2.0 * 3.0f64.ln());
        assert!((r - Complex64::new(expect, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cantor_residue_along_oscillatory_line() {
        let d = (2.0f64).ln() / (3.0f64).ln();
        let p = 2.0 * std::f64::consts::PI / 3.0f64.ln();
        for k in [1i32, -3, 7] {
            let w = Complex64::new(d, k as f64 * p);
            let r = residue_simple(&cantor_zeta(), w).unwrap();
            // den' = ln(3) 3^s and 3^w = 2 on the pole line.
            let expect = 1.0 / (2.0 * 3.0f64.ln());
            assert!((r - Complex64::new(expect, 0.0)).norm() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn regular_point_is_refused() {
        match residue_simple(&cantor_zeta(), Complex64::new(2.0, 0.0)) {
            Err(ExprError::NotAZero { .. }) => {}
            other => panic!("expected NotAZero, got {other:?}"),
        }
    }

    #[test]
    fn double_pole_is_refused() {
        let f = Expr::div(
            Expr::real(1.0),
            Expr::mul(vec![Expr::s_minus(1.0), Expr::s_minus(1.0)]),
        );
        match residue_simple(&f, Complex64::new(1.0, 0.0)) {
            Err(ExprError::HigherOrder { .. }) => {}
            other => panic!("expected HigherOrder, got {other:?}"),
        }
    }

    #[test]
    fn residues_add_across_sums() {
        // 1/(s-1) + 1/(3^s-2) + 5 is regular at 1 except for the first term.
        let f = Expr::add(vec![
            Expr::div(Expr::real(1.0), Expr::s_minus(1.0)),
            cantor_zeta(),
            Expr::real(5.0),
        ]);
        let r = residue_simple(&f, Complex64::new(1.0, 0.0)).unwrap();
        assert!((r - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn prefactors_scale_residues() {
        // (2^(1-s)/s) * 1/(3^s-2): residue at D picks up the prefactor value.
        let d = (2.0f64).ln() / (3.0f64).ln();
        let pref = Expr::div(
            Expr::mul(vec![Expr::real(2.0), Expr::exp_base(Base::rational(1, 2))]),
            Expr::var(),
        );
        let f = Expr::mul(vec![pref.clone(), cantor_zeta()]);
        let r = residue_simple(&f, Complex64::new(d, 0.0)).unwrap();
        let pref_value = pref.eval(Complex64::new(d, 0.0)).unwrap();
        let expect = pref_value / (2.0 * 3.0f64.ln());
        assert!((r - expect).norm() < 1e-14);
    }

    #[test]
    fn removable_singularity_gives_zero_residue() {
        // (3^s - 2)/(3^s - 2) is constant 1; classify sees num(w) = 0 at the
        // denominator zero and returns residue 0, which is then refused as
        // "no pole" only if exactly zero. A zero residue is acceptable here.
        let num = Expr::add(vec![Expr::exp_base(Base::rational(3, 1)), Expr::real(-2.0)]);
        let f = Expr::div(num.clone(), num);
        let d = (2.0f64).ln() / (3.0f64).ln();
        let r = residue_simple(&f, Complex64::new(d, 0.0)).unwrap();
        assert!(r.norm() < 1e-8);
    }
}
