//! Lattice versus nonlattice arithmetic of scale sets.
//!
//! The decision rides on whether the ratios of `ln` scales are rational.
//! Naive best-rational search cannot answer that at floating precision:
//! continued-fraction convergents approximate any real to `1/q^2`, so some
//! "rational" fit always exists. What distinguishes a numerically rational
//! ratio is an exploding partial quotient: the expansion of a true rational
//! (plus rounding noise) runs through its exact quotients and then produces
//! an enormous one as it starts resolving the noise floor. We accept a
//! convergent only at such an explosion, with a bounded denominator and a
//! tiny relative residual, and report the grey zone in between as
//! [`Classification::Ambiguous`] rather than guessing.

use num_complex::Complex64;

use crate::{DirichletPolynomial, MoranError, RootInfo};

/// Verdict on the multiplicative structure of the scale set.
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    /// All scales are integer powers of one generator: `r_j = r^(k_j)`.
    /// Roots repeat exactly under translation by `i * period`.
    Lattice {
        /// The largest common ratio `r` in `(0, 1)`.
        generator: f64,
        /// Powers `k_j` with `r_j = r^(k_j)`, in the order of the
        /// polynomial's terms.
        exponents: Vec<u64>,
        /// Vertical period `2 pi / ln(1/r)` of the root set.
        period: f64,
    },
    /// At least two scales are incommensurable. `rank_bound` is the number
    /// of pairwise-incommensurable classes, an upper bound on the rank of
    /// the multiplicative group generated by the scales.
    NonLattice { rank_bound: usize },
    /// Some log-scale ratio falls between clearly rational and clearly
    /// irrational at f64 precision.
    Ambiguous,
}

/// Largest denominator considered for a rational log-scale ratio.
const Q_MAX: u64 = 1_000_000;
/// Partial quotient treated as an explosion (the expansion has hit the
/// rounding-noise floor of a rational value).
const QUOTIENT_EXPLOSION: f64 = 1e7;
/// Relative residual accepted for a rational fit.
const REL_TOL: f64 = 1e-9;

enum RatioKind {
    Rational(u64, u64),
    Irrational,
    Grey,
}

/// Classify `x >= 1` as numerically rational, irrational, or undecidable.
fn detect_rational(x: f64) -> RatioKind {
    debug_assert!(x >= 1.0 && x.is_finite());
    let mut p_prev: u64 = 1;
    let mut q_prev: u64 = 0;
    let mut p: u64 = x.floor() as u64;
    let mut q: u64 = 1;
    let mut rem = x - x.floor();
    for _ in 0..64 {
        let rel = (x - p as f64 / q as f64).abs() / x;
        let exploded = rem < 1e-15 || 1.0 / rem > QUOTIENT_EXPLOSION;
        if exploded {
            if rel <= REL_TOL {
                return RatioKind::Rational(p, q);
            }
            if rel <= 10.0 * REL_TOL {
                return RatioKind::Grey;
            }
            if rem < 1e-15 {
                // Expansion genuinely terminated yet the fit is poor;
                // cannot happen for consistent input, call it grey.
                return RatioKind::Grey;
            }
        }
        let a = (1.0 / rem).floor();
        rem = 1.0 / rem - a;
        let a = a as u64;
        let p_next = match a.checked_mul(p).and_then(|v| v.checked_add(p_prev)) {
            Some(v) => v,
            None => return RatioKind::Irrational,
        };
        let q_next = match a.checked_mul(q).and_then(|v| v.checked_add(q_prev)) {
            Some(v) => v,
            None => return RatioKind::Irrational,
        };
        if q_next > Q_MAX {
            return RatioKind::Irrational;
        }
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    RatioKind::Irrational
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm_checked(a: u64, b: u64) -> Option<u64> {
    (a / gcd(a, b)).checked_mul(b)
}

/// Decide the lattice structure of the polynomial's scale set.
pub fn classify(f: &DirichletPolynomial) -> Classification {
    let lambdas: Vec<f64> = f.terms().iter().map(|(b, _)| -b.ln()).collect();
    let lambda_min = lambdas.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut fractions: Vec<(u64, u64)> = Vec::with_capacity(lambdas.len());
    let mut all_rational = true;
    let mut grey = false;
    for &l in &lambdas {
        match detect_rational(l / lambda_min) {
            RatioKind::Rational(p, q) => fractions.push((p, q)),
            RatioKind::Irrational => {
                all_rational = false;
                fractions.push((0, 0));
            }
            RatioKind::Grey => {
                grey = true;
                fractions.push((0, 0));
            }
        }
    }
    if grey {
        return Classification::Ambiguous;
    }
    if all_rational {
        let mut l: u64 = 1;
        for &(_, q) in &fractions {
            match lcm_checked(l, q) {
                Some(v) if v <= 1_000_000_000 => l = v,
                // A generator this fine is numerically meaningless.
                _ => return Classification::Ambiguous,
            }
        }
        let mut exponents: Vec<u64> = fractions.iter().map(|&(p, q)| p * (l / q)).collect();
        let common = exponents.iter().fold(l, |acc, &k| gcd(acc, k));
        if common > 1 {
            for k in &mut exponents {
                *k /= common;
            }
        }
        let g = lambda_min / l as f64 * common as f64;
        return Classification::Lattice {
            generator: (-g).exp(),
            exponents,
            period: 2.0 * std::f64::consts::PI / g,
        };
    }
    // Group scales into pairwise-commensurable classes.
    let mut class_of: Vec<Option<usize>> = vec![None; lambdas.len()];
    let mut representatives: Vec<f64> = Vec::new();
    for (i, &l) in lambdas.iter().enumerate() {
        for (ci, &rep) in representatives.iter().enumerate() {
            let ratio = if l >= rep { l / rep } else { rep / l };
            match detect_rational(ratio) {
                RatioKind::Rational(_, _) => {
                    class_of[i] = Some(ci);
                    break;
                }
                RatioKind::Grey => return Classification::Ambiguous,
                RatioKind::Irrational => {}
            }
        }
        if class_of[i].is_none() {
            class_of[i] = Some(representatives.len());
            representatives.push(l);
        }
    }
    Classification::NonLattice { rank_bound: representatives.len() }
}

/// Translate a fundamental set of roots through `periods` vertical periods
/// in both directions. Exact for lattice polynomials, refused otherwise.
pub fn periodic_extend(
    f: &DirichletPolynomial,
    base: &[RootInfo],
    periods: u32,
) -> Result<Vec<RootInfo>, MoranError> {
    let period = match classify(f) {
        Classification::Lattice { period, .. } => period,
        _ => return Err(MoranError::NotLattice),
    };
    let mut out = Vec::with_capacity(base.len() * (2 * periods as usize + 1));
    for k in -i64::from(periods)..=i64::from(periods) {
        for r in base {
            out.push(RootInfo {
                location: r.location + Complex64::new(0.0, k as f64 * period),
                order: r.order,
            });
        }
    }
    out.sort_by(|a, b| {
        (a.location.im, a.location.re)
            .partial_cmp(&(b.location.im, b.location.re))
            .expect("root coordinates are finite")
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fzeta_expr::Base;

    #[test]
    fn quarter_half_is_lattice() {
        let f = DirichletPolynomial::from_scales(vec![
            Base::rational(1, 4),
            Base::rational(1, 2),
        ])
        .unwrap();
        match classify(&f) {
            Classification::Lattice { generator, exponents, period } => {
                assert!((generator - 0.5).abs() < 1e-15);
                assert_eq!(exponents, vec![2, 1]);
                assert!((period - 2.0 * std::f64::consts::PI / 2.0f64.ln()).abs() < 1e-12);
            }
            other => panic!("expected lattice, got {other:?}"),
        }
    }

    #[test]
    fn half_third_is_nonlattice() {
        let f = DirichletPolynomial::from_scales(vec![
            Base::rational(1, 2),
            Base::rational(1, 3),
        ])
        .unwrap();
        assert_eq!(classify(&f), Classification::NonLattice { rank_bound: 2 });
    }

    #[test]
    fn powers_share_one_generator() {
        let f = DirichletPolynomial::from_scales(vec![
            Base::rational(1, 2),
            Base::rational(1, 4),
            Base::rational(1, 8),
        ])
        .unwrap();
        match classify(&f) {
            Classification::Lattice { generator, exponents, .. } => {
                assert!((generator - 0.5).abs() < 1e-15);
                assert_eq!(exponents, vec![1, 2, 3]);
            }
            other => panic!("expected lattice, got {other:?}"),
        }
    }

    #[test]
    fn single_scale_is_its_own_generator() {
        let f = DirichletPolynomial::new(vec![(Base::rational(1, 3), 2.0)]).unwrap();
        match classify(&f) {
            Classification::Lattice { generator, exponents, period } => {
                assert!((generator - 1.0 / 3.0).abs() < 1e-15);
                assert_eq!(exponents, vec![1]);
                assert!((period - 2.0 * std::f64::consts::PI / 3.0f64.ln()).abs() < 1e-12);
            }
            other => panic!("expected lattice, got {other:?}"),
        }
    }

    #[test]
    fn grey_zone_is_ambiguous() {
        // Second scale engineered so the log ratio is 2 + 5e-9: too far
        // from 2 to accept, too close to call irrational.
        let ratio = 2.0 + 5e-9;
        let r2 = (-ratio * 2.0f64.ln()).exp();
        let f = DirichletPolynomial::new(vec![
            (Base::rational(1, 2), 1.0),
            (Base::real(r2), 1.0),
        ])
        .unwrap();
        assert_eq!(classify(&f), Classification::Ambiguous);
    }

    #[test]
    fn periodic_extend_requires_lattice() {
        let f = DirichletPolynomial::from_scales(vec![
            Base::rational(1, 2),
            Base::rational(1, 3),
        ])
        .unwrap();
        match periodic_extend(&f, &[], 3) {
            Err(MoranError::NotLattice) => {}
            other => panic!("expected NotLattice, got {other:?}"),
        }
    }

    #[test]
    fn periodic_extend_translates_exactly() {
        let f = DirichletPolynomial::new(vec![(Base::rational(1, 3), 2.0)]).unwrap();
        let d = 2.0f64.ln() / 3.0f64.ln();
        let base = vec![RootInfo { location: Complex64::new(d, 0.0), order: 1 }];
        let all = periodic_extend(&f, &base, 2).unwrap();
        assert_eq!(all.len(), 5);
        let p = 2.0 * std::f64::consts::PI / 3.0f64.ln();
        for (k, r) in (-2i32..=2).zip(&all) {
            assert!((r.location - Complex64::new(d, f64::from(k) * p)).norm() < 1e-12);
        }
    }
}
