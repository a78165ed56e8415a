//! Pole divisors described exactly: finitely many isolated points plus
//! finitely many vertical arithmetic progressions.

use fzeta_moran::Window;
use num_complex::Complex64;

use crate::SprayError;

/// Points within this distance are treated as the same pole when
/// enumerating a window.
const COINCIDENCE_TOL: f64 = 1e-9;

/// The vertical progression `base + i k period` over all integers `k`,
/// every member carrying the same order.
#[derive(Clone, Copy, Debug)]
pub struct PeriodicPoles {
    pub base: Complex64,
    pub period: f64,
    pub order: i32,
}

/// A divisor: poles with positive orders, zeros with negative ones.
/// Lattice-type zeta functions have infinitely many poles, but always as
/// finitely many vertical progressions, so this finite description is
/// exact and windows can be enumerated without truncation error.
#[derive(Clone, Debug, Default)]
pub struct Divisor {
    fixed: Vec<(Complex64, i32)>,
    families: Vec<PeriodicPoles>,
}

impl Divisor {
    pub fn from_parts(fixed: Vec<(Complex64, i32)>, families: Vec<PeriodicPoles>) -> Self {
        for f in &families {
            assert!(f.period.is_finite() && f.period > 0.0, "period must be positive");
        }
        Divisor { fixed, families }
    }

    pub fn fixed(&self) -> &[(Complex64, i32)] {
        &self.fixed
    }

    pub fn families(&self) -> &[PeriodicPoles] {
        &self.families
    }

    pub fn push_point(&mut self, at: Complex64, order: i32) {
        self.fixed.push((at, order));
    }

    pub fn push_family(&mut self, family: PeriodicPoles) {
        assert!(family.period.is_finite() && family.period > 0.0, "period must be positive");
        self.families.push(family);
    }

    /// Every divisor point inside the window (inclusive, with a small
    /// slack so points sitting exactly on the boundary are kept), with
    /// orders of coincident points added and exact cancellations dropped.
    /// Sorted by imaginary part, then real part.
    pub fn points_in(&self, window: &Window) -> Vec<(Complex64, i32)> {
        let slack = COINCIDENCE_TOL * (1.0 + window.width().max(window.height()));
        let inside = |z: Complex64| {
            z.re >= window.re_min - slack
                && z.re <= window.re_max + slack
                && z.im >= window.im_min - slack
                && z.im <= window.im_max + slack
        };
        let mut raw: Vec<(Complex64, i32)> = Vec::new();
        for &(z, ord) in &self.fixed {
            if inside(z) {
                raw.push((z, ord));
            }
        }
        for f in &self.families {
            let lo = ((window.im_min - slack - f.base.im) / f.period).ceil() as i64;
            let hi = ((window.im_max + slack - f.base.im) / f.period).floor() as i64;
            for k in lo..=hi {
                let z = f.base + Complex64::new(0.0, k as f64 * f.period);
                if inside(z) {
                    raw.push((z, f.order));
                }
            }
        }
        raw.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
        let mut merged: Vec<(Complex64, i32)> = Vec::new();
        for (z, ord) in raw {
            match merged.last_mut() {
                Some((w, total)) if (*w - z).norm() <= COINCIDENCE_TOL => *total += ord,
                _ => merged.push((z, ord)),
            }
        }
        merged.retain(|&(_, ord)| ord != 0);
        merged.sort_by(|a, b| (a.0.im, a.0.re).partial_cmp(&(b.0.im, b.0.re)).unwrap());
        merged
    }

    /// The support inside the window: distinct points, orders forgotten.
    pub fn support_in(&self, window: &Window) -> Vec<Complex64> {
        self.points_in(window).into_iter().map(|(z, _)| z).collect()
    }

    /// The Minkowski sum: every pairwise sum of points, with orders added
    /// per pair. Orders are bookkeeping for the pairs, not net pole orders
    /// of any particular function; product formulas are conjectures tested
    /// at the level of support sets. Progressions can only be summed with
    /// points or with progressions of the same period; otherwise the sum
    /// set would be dense on vertical lines and no finite description
    /// exists.
    pub fn minkowski_sum(&self, other: &Divisor) -> Result<Divisor, SprayError> {
        let mut out = Divisor::default();
        for &(p, op) in &self.fixed {
            for &(q, oq) in &other.fixed {
                out.fixed.push((p + q, op + oq));
            }
        }
        for &(p, op) in &self.fixed {
            for f in &other.families {
                out.families.push(PeriodicPoles {
                    base: f.base + p,
                    period: f.period,
                    order: f.order + op,
                });
            }
        }
        for &(q, oq) in &other.fixed {
            for f in &self.families {
                out.families.push(PeriodicPoles {
                    base: f.base + q,
                    period: f.period,
                    order: f.order + oq,
                });
            }
        }
        for f in &self.families {
            for h in &other.families {
                if (f.period - h.period).abs() > 1e-12 * f.period.max(h.period) {
                    return Err(SprayError::IncommensurablePeriods(f.period, h.period));
                }
                out.families.push(PeriodicPoles {
                    base: f.base + h.base,
                    period: f.period,
                    order: f.order + h.order,
                });
            }
        }
        Ok(out)
    }

    /// Whether the two divisors occupy the same points of the window,
    /// ignoring orders.
    pub fn same_support_in(&self, other: &Divisor, window: &Window, tol: f64) -> bool {
        let a = self.support_in(window);
        let b = other.support_in(window);
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).norm() <= tol)
    }
}
