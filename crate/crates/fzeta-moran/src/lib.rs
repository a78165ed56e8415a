//! Dirichlet polynomials `1 - sum_j c_j r_j^s` and their root structure.
//!
//! These are the denominators of self-similar scaling zeta functions. Their
//! zero sets are the scaling complex dimensions: a single real root on the
//! positive axis (the similarity dimension) plus, depending on arithmetic,
//! either exact vertical translates of finitely many roots (lattice case,
//! when all scales are powers of one ratio) or a quasiperiodic cloud
//! clustering near the real root's vertical line (nonlattice case).
//!
//! Roots are located by the argument principle on rectangles, refined by
//! Newton iteration, and double-checked against the window's total winding
//! count, so a silently missed root is an error, not a wrong answer.

mod classify;
mod roots;

pub use classify::{classify, periodic_extend, Classification};
pub use roots::{find_roots, RootInfo, Window};

use fzeta_expr::{Base, Expr};
use num_complex::Complex64;
use thiserror::Error;

/// Absolute bound accepted for `|f(sigma_0)|` at the computed real root.
pub const REAL_ROOT_RESIDUAL: f64 = 1e-14;

#[derive(Debug, Clone, Error)]
pub enum MoranError {
    /// The coefficient mass is at most one, so `sum c_j r_j^s = 1` has no
    /// solution on the positive real axis.
    #[error("coefficient mass {mass} is <= 1; no positive real root exists")]
    NoRealRoot { mass: f64 },

    /// The subdivision search lost or double-counted a root relative to the
    /// whole-window winding count.
    #[error("window winding counts {expected} roots but refinement located {found}")]
    CountMismatch { expected: i64, found: i64 },

    /// A lattice-only operation was applied to a nonlattice polynomial.
    #[error("scales are not commensurable; lattice-only operation refused")]
    NotLattice,

    /// Winding quadrature failed to stabilize even after boundary jitter.
    #[error("argument-principle quadrature failed: {0}")]
    Winding(String),

    /// Structurally invalid input.
    #[error("invalid Dirichlet polynomial: {0}")]
    Invalid(String),
}

/// The polynomial `f(s) = 1 - sum_j c_j r_j^s` with scales `0 < r_j < 1`
/// and positive weights `c_j` (integer weights arise as multiplicities of
/// repeated scales).
#[derive(Debug, Clone)]
pub struct DirichletPolynomial {
    terms: Vec<(Base, f64)>,
}

impl DirichletPolynomial {
    pub fn new(terms: Vec<(Base, f64)>) -> Result<Self, MoranError> {
        if terms.is_empty() {
            return Err(MoranError::Invalid("no scaling terms".into()));
        }
        for (b, c) in &terms {
            let r = b.value();
            if !(r > 0.0 && r < 1.0) {
                return Err(MoranError::Invalid(format!("scale {r} outside (0, 1)")));
            }
            if !(c.is_finite() && *c > 0.0) {
                return Err(MoranError::Invalid(format!("weight {c} must be positive")));
            }
        }
        Ok(DirichletPolynomial { terms })
    }

    /// Equal-weight constructor: `1 - sum_j r_j^s`.
    pub fn from_scales(scales: Vec<Base>) -> Result<Self, MoranError> {
        Self::new(scales.into_iter().map(|b| (b, 1.0)).collect())
    }

    pub fn terms(&self) -> &[(Base, f64)] {
        &self.terms
    }

    /// Total coefficient mass `sum c_j`; a real root exists iff this
    /// exceeds one.
    pub fn mass(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Evaluate `f(s) = 1 - sum c_j r_j^s`.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (b, c) in &self.terms {
            acc -= *c * (s * b.ln()).exp();
        }
        acc
    }

    /// Evaluate `f'(s) = - sum c_j ln(r_j) r_j^s`.
    pub fn eval_deriv(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, c) in &self.terms {
            acc -= *c * b.ln() * (s * b.ln()).exp();
        }
        acc
    }

    /// The same function as a serializable closed-form expression.
    pub fn to_expr(&self) -> Expr {
        let mut parts = vec![Expr::real(1.0)];
        for (b, c) in &self.terms {
            parts.push(Expr::mul(vec![Expr::real(-c), Expr::exp_base(b.clone())]));
        }
        Expr::add(parts)
    }

    /// The unique real root `sigma_0` of `f`, located by bisection alone.
    ///
    /// `f(sigma) = 1 - sum c r^sigma` is strictly increasing with limits
    /// `1 - mass < 0` at `sigma = 0` and `1` at `+infinity`, so plain
    /// bisection is guaranteed; it is kept as a slow independent reference
    /// for the Newton version.
    pub fn real_dimension_bisect(&self) -> Result<f64, MoranError> {
        let mass = self.mass();
        if mass <= 1.0 {
            return Err(MoranError::NoRealRoot { mass });
        }
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        while self.eval(Complex64::new(hi, 0.0)).re < 0.0 {
            hi *= 2.0;
            if hi > 1e4 {
                return Err(MoranError::Invalid("real root escaped beyond 1e4".into()));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if self.eval(Complex64::new(mid, 0.0)).re < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The unique real root `sigma_0`, coarse bisection finished by Newton.
    ///
    /// The result satisfies `|f(sigma_0)| <=` [`REAL_ROOT_RESIDUAL`].
    pub fn real_dimension(&self) -> Result<f64, MoranError> {
        let mass = self.mass();
        if mass <= 1.0 {
            return Err(MoranError::NoRealRoot { mass });
        }
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        while self.eval(Complex64::new(hi, 0.0)).re < 0.0 {
            hi *= 2.0;
            if hi > 1e4 {
                return Err(MoranError::Invalid("real root escaped beyond 1e4".into()));
            }
        }
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if self.eval(Complex64::new(mid, 0.0)).re < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..60 {
            let fx = self.eval(Complex64::new(x, 0.0)).re;
            let dfx = self.eval_deriv(Complex64::new(x, 0.0)).re;
            let step = fx / dfx;
            x -= step;
            if step.abs() <= 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
        let residual = self.eval(Complex64::new(x, 0.0)).re.abs();
        if residual > REAL_ROOT_RESIDUAL {
            return Err(MoranError::Invalid(format!(
                "Newton stalled with |f| = {residual:.3e} at sigma = {x}"
            )));
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_real_dimension() {
        // 1 - 2 (1/3)^s vanishes at log 2 / log 3.
        let f = DirichletPolynomial::new(vec![(Base::rational(1, 3), 2.0)]).unwrap();
        let d = f.real_dimension().unwrap();
        assert!((d - 2.0f64.ln() / 3.0f64.ln()).abs() < 1e-15);
        let db = f.real_dimension_bisect().unwrap();
        assert!((d - db).abs() < 1e-13);
    }

    /// Golden-ratio string: 1 - (1/2)^s - (1/4)^s vanishes where
    /// 2^-s equals 1/golden ratio, so sigma_0 = log_2 phi.
    #[test]
    fn golden_real_dimension() {
        let f = DirichletPolynomial::from_scales(vec![
            Base::rational(1, 2),
            Base::rational(1, 4),
        ])
        .unwrap();
        let phi = 0.5 * (1.0 + 5.0f64.sqrt());
        let expect = phi.ln() / 2.0f64.ln();
        assert!((f.real_dimension().unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn mass_at_most_one_is_rejected() {
        let f = DirichletPolynomial::new(vec![(Base::rational(1, 2), 1.0)]).unwrap();
        match f.real_dimension() {
            Err(MoranError::NoRealRoot { mass }) => assert_eq!(mass, 1.0),
            other => panic!("expected NoRealRoot, got {other:?}"),
        }
    }

    #[test]
    fn expr_agrees_with_native_eval() {
        let f = DirichletPolynomial::new(vec![
            (Base::rational(1, 2), 1.0),
            (Base::rational(1, 3), 1.0),
        ])
        .unwrap();
        let e = f.to_expr();
        for s in [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.787, 12.0),
            Complex64::new(-0.3, -4.2),
        ] {
            let a = f.eval(s);
            let b = e.eval(s).unwrap();
            assert!((a - b).norm() < 1e-14 * (1.0 + a.norm()));
        }
    }
}
