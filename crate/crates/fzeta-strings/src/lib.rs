//! Fractal strings as countable multisets of interval lengths.
//!
//! A fractal string is a bounded open subset of the line, remembered only
//! through the nonincreasing sequence of its connected-component lengths
//! `l_1 >= l_2 >= ...` together with multiplicities.  Everything this crate
//! computes is driven by that sequence: the counting function
//! `N(x) = #{j : 1/l_j <= x}`, the exact inner tube volume
//! `V(eps) = sum_j min(l_j, 2 eps)`, the geometric zeta function
//! `zeta_L(s) = sum_j l_j^s`, and a numerical estimate of its abscissa of
//! convergence.
//!
//! Several families ship with closed-form zeta functions expressed in the
//! [`Expr`] grammar, so poles and residues can be read off symbolically:
//!
//! * the Cantor string, `zeta(s) = 1/(3^s - 2)`,
//! * generalized Cantor strings with contraction `a` in `(0, 1/2)`,
//!   `zeta(s) = (1 - 2a)^s / (1 - 2 a^s)`,
//! * arbitrary self-similar strings with finitely many scaling ratios and
//!   gaps, `zeta(s) = sum_k g_k^s / (1 - sum_j r_j^s)`.
//!
//! The power-tail string with lengths `l_j = j^{-a} - (j+1)^{-a}` and the
//! oscillating-counting family have no closed form here; their zeta values
//! come from partial sums with a tail estimate, and their lengths are
//! produced lazily (for the oscillating family by inverting a prescribed
//! smooth counting profile).
//!
//! Length enumeration is lazy throughout.  Operations that must walk the
//! sequence stop at [`MIN_LENGTH`] or after [`MAX_ITEMS`] distinct lengths,
//! whichever comes first, and report a [`StringError::ResourceLimit`] when a
//! requested scale lies beyond that horizon.

mod enumerate;
mod ops;

pub use enumerate::Lengths;
pub use ops::AbscissaEstimate;

use fzeta_expr::{Base, Expr};
use thiserror::Error;

/// Enumeration cutoff: lengths below this are left to analytic tail handling.
pub const MIN_LENGTH: f64 = 1e-12;

/// Enumeration cutoff: at most this many distinct lengths are ever produced.
pub const MAX_ITEMS: usize = 10_000_000;

/// Errors from string construction and evaluation.
#[derive(Debug, Error)]
pub enum StringError {
    /// A zeta partial sum was requested at or below the abscissa of
    /// convergence, where the series has no finite value.
    #[error("zeta series diverges: Re s = {re_s} is not above the abscissa {abscissa}")]
    Divergent { re_s: f64, abscissa: f64 },
    /// The string has no closed-form zeta function; only partial sums are
    /// available.
    #[error("no closed-form geometric zeta function for this string")]
    NoClosedForm,
    /// Enumeration hit the item cutoff before reaching the requested scale.
    #[error("length enumeration exceeded {items} items before reaching scale {scale:.3e}")]
    ResourceLimit { items: usize, scale: f64 },
    /// Construction parameters outside the valid range.
    #[error("invalid string: {0}")]
    Invalid(String),
}

/// How a string's length sequence is generated.
///
/// The variant fixes both the lazy enumeration scheme and which closed-form
/// data (zeta function, dimension) are available.
#[derive(Debug, Clone)]
pub enum Provenance {
    /// A finite list supplied by the caller, sorted and merged.
    Explicit,
    /// The classical middle-third Cantor string: lengths `3^-k` with
    /// multiplicity `2^(k-1)`.
    Cantor,
    /// Two copies scaled by `a` around a central gap of length `1 - 2a`.
    GeneralizedCantor { a: f64 },
    /// Lengths `j^-a - (j+1)^-a`, the gaps of the sequence `j^-a`.
    PowerTail { a: f64 },
    /// Finitely many scaling ratios and gap lengths; lengths are the gap
    /// lengths scaled by all products of ratios.
    SelfSimilar {
        /// Distinct ratio values paired with their multiplicities.
        ratios: Vec<(f64, f64)>,
        /// Distinct gap values paired with their multiplicities.
        gaps: Vec<(f64, f64)>,
    },
    /// Lengths chosen so that the counting function tracks the profile
    /// `x^dim (1 + 2 beta cos(tau log x))`.
    OscillatingCounting { dim: f64, tau: f64, beta: f64 },
}

/// The geometric zeta function of a string, as far as it is computable.
#[derive(Debug, Clone)]
pub enum GeometricZetaForm {
    /// A closed-form expression, valid in the whole plane minus its poles.
    Closed(Expr),
    /// No closed form: values are only available through
    /// [`FractalString::zeta_partial`] above the abscissa.
    PartialSumsOnly,
}

/// A fractal string: a nonincreasing sequence of lengths with multiplicity.
#[derive(Debug, Clone)]
pub struct FractalString {
    provenance: Provenance,
    /// Exact rational/symbolic bases where the provenance has them, used to
    /// build closed-form zeta expressions.  Empty otherwise.
    ratio_bases: Vec<(Base, f64)>,
    gap_bases: Vec<(Base, f64)>,
    /// For [`Provenance::Explicit`]: the merged, descending length table.
    table: Vec<(f64, f64)>,
    total_length: f64,
    /// The abscissa of convergence when it is known in closed form.
    /// `None` for finite strings, whose zeta is entire.
    dimension: Option<f64>,
}

impl FractalString {
    /// The middle-third Cantor string on an interval of length one.
    pub fn cantor() -> Self {
        FractalString {
            provenance: Provenance::Cantor,
            ratio_bases: vec![(Base::Rational(1, 3), 2.0)],
            gap_bases: vec![(Base::Rational(1, 3), 1.0)],
            table: Vec::new(),
            total_length: 1.0,
            dimension: Some(2f64.ln() / 3f64.ln()),
        }
    }

    /// The generalized Cantor string with contraction ratio `a` in `(0, 1/2)`:
    /// each interval splits into two copies scaled by `a` around a gap of
    /// relative length `1 - 2a`.  Its dimension is `log 2 / log(1/a)`.
    pub fn generalized_cantor(a: f64) -> Result<Self, StringError> {
        if !(a > 0.0 && a < 0.5) || !a.is_finite() {
            return Err(StringError::Invalid(format!(
                "contraction ratio must lie in (0, 1/2), got {a}"
            )));
        }
        Ok(FractalString {
            provenance: Provenance::GeneralizedCantor { a },
            ratio_bases: vec![(Base::Real(a), 2.0)],
            gap_bases: vec![(Base::Real(1.0 - 2.0 * a), 1.0)],
            table: Vec::new(),
            total_length: 1.0,
            dimension: Some(2f64.ln() / (1.0 / a).ln()),
        })
    }

    /// The string with lengths `j^-a - (j+1)^-a` for `j >= 1`, `a > 0`.
    ///
    /// These are the gaps between consecutive points of the sequence `j^-a`
    /// in `(0, 1]`; the dimension is `1/(a+1)` and the total length is one.
    pub fn a_string(a: f64) -> Result<Self, StringError> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(StringError::Invalid(format!(
                "power-tail exponent must be positive, got {a}"
            )));
        }
        Ok(FractalString {
            provenance: Provenance::PowerTail { a },
            ratio_bases: Vec::new(),
            gap_bases: Vec::new(),
            table: Vec::new(),
            total_length: 1.0,
            dimension: Some(1.0 / (a + 1.0)),
        })
    }

    /// A self-similar string with the given scaling ratios and gap lengths.
    ///
    /// The length multiset is `{ g r_{j_1} ... r_{j_n} }` over all gaps `g`
    /// and all finite words in the ratios.  Repeats in either slice act as
    /// multiplicities.  Requires every ratio in `(0, 1)`, every gap positive,
    /// and `sum r_j < 1` so the total length is finite.
    pub fn self_similar(ratios: &[Base], gaps: &[Base]) -> Result<Self, StringError> {
        if ratios.is_empty() || gaps.is_empty() {
            return Err(StringError::Invalid(
                "need at least one ratio and one gap".into(),
            ));
        }
        let mut ratio_sum = 0.0;
        for r in ratios {
            let v = r.value();
            if !(v > 0.0 && v < 1.0) {
                return Err(StringError::Invalid(format!(
                    "scaling ratio {v} outside (0, 1)"
                )));
            }
            ratio_sum += v;
        }
        if ratio_sum >= 1.0 {
            return Err(StringError::Invalid(format!(
                "scaling ratios sum to {ratio_sum}, must be below one"
            )));
        }
        for g in gaps {
            let v = g.value();
            if !(v > 0.0) || !v.is_finite() {
                return Err(StringError::Invalid(format!("gap length {v} not positive")));
            }
        }
        let ratio_bases = group_bases(ratios);
        let gap_bases = group_bases(gaps);
        let grouped_ratios: Vec<(f64, f64)> =
            ratio_bases.iter().map(|(b, m)| (b.value(), *m)).collect();
        let grouped_gaps: Vec<(f64, f64)> =
            gap_bases.iter().map(|(b, m)| (b.value(), *m)).collect();
        let gap_sum: f64 = grouped_gaps.iter().map(|(g, m)| g * *m).sum();
        let dimension = self_similar_dimension(&grouped_ratios);
        Ok(FractalString {
            provenance: Provenance::SelfSimilar {
                ratios: grouped_ratios,
                gaps: grouped_gaps,
            },
            ratio_bases,
            gap_bases,
            table: Vec::new(),
            total_length: gap_sum / (1.0 - ratio_sum),
            dimension: Some(dimension),
        })
    }

    /// A string whose counting function follows the oscillating profile
    /// `V(x) = x^dim (1 + 2 beta cos(tau log x))`.
    ///
    /// Lengths are `l_j = 1/x_j` where `V(x_j) = j`.  The amplitude must
    /// satisfy `beta < min(1/2, dim / (2 (dim + tau)))`, which keeps `V`
    /// strictly increasing so the inversion is well defined.
    pub fn oscillating_counting(dim: f64, tau: f64, beta: f64) -> Result<Self, StringError> {
        if !(dim > 0.0 && dim < 1.0) {
            return Err(StringError::Invalid(format!(
                "dimension must lie in (0, 1), got {dim}"
            )));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(StringError::Invalid(format!(
                "log-frequency must be positive, got {tau}"
            )));
        }
        let bound = (0.5f64).min(dim / (2.0 * (dim + tau)));
        if !(beta >= 0.0 && beta < bound) {
            return Err(StringError::Invalid(format!(
                "amplitude {beta} outside [0, {bound:.6}) for dim {dim}, tau {tau}"
            )));
        }
        let mut string = FractalString {
            provenance: Provenance::OscillatingCounting { dim, tau, beta },
            ratio_bases: Vec::new(),
            gap_bases: Vec::new(),
            table: Vec::new(),
            total_length: 0.0,
            dimension: Some(dim),
        };
        string.total_length = ops::oscillating_total_length(&string);
        Ok(string)
    }

    /// A finite string given by an explicit list of lengths.
    ///
    /// The list is sorted in descending order and exactly equal lengths are
    /// merged into multiplicities.  The zeta function of a finite string is
    /// entire, so the abscissa is reported as minus infinity.
    pub fn explicit(lengths: &[f64]) -> Result<Self, StringError> {
        if lengths.is_empty() {
            return Err(StringError::Invalid("empty length list".into()));
        }
        let mut sorted = Vec::with_capacity(lengths.len());
        for &l in lengths {
            if !(l > 0.0) || !l.is_finite() {
                return Err(StringError::Invalid(format!("length {l} not positive")));
            }
            sorted.push(l);
        }
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut table: Vec<(f64, f64)> = Vec::new();
        for l in sorted {
            match table.last_mut() {
                Some((prev, m)) if *prev == l => *m += 1.0,
                _ => table.push((l, 1.0)),
            }
        }
        let total_length = table.iter().map(|(l, m)| l * *m).sum();
        Ok(FractalString {
            provenance: Provenance::Explicit,
            ratio_bases: Vec::new(),
            gap_bases: Vec::new(),
            table,
            total_length,
            dimension: None,
        })
    }

    /// How this string's lengths are generated.
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// The sum of all lengths, i.e. the measure of the underlying open set.
    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// The abscissa of convergence of the zeta series, when known exactly.
    ///
    /// `None` means the series converges everywhere (finite strings).  For a
    /// purely numerical estimate see [`FractalString::abscissa_estimate`].
    pub fn dimension(&self) -> Option<f64> {
        self.dimension
    }

    /// The scaling ratios as `(base, multiplicity)` pairs, exact where the
    /// construction had them. Empty for strings without self-similar
    /// structure (explicit tables, power tails, counting profiles).
    pub fn ratio_bases(&self) -> &[(Base, f64)] {
        &self.ratio_bases
    }

    pub(crate) fn explicit_table(&self) -> &[(f64, f64)] {
        &self.table
    }
}

/// Groups a base list into `(value, multiplicity)` pairs, merging entries
/// with exactly equal numeric value and keeping the first base seen.
fn group_bases(bases: &[Base]) -> Vec<(Base, f64)> {
    let mut grouped: Vec<(Base, f64)> = Vec::new();
    for b in bases {
        match grouped.iter_mut().find(|(g, _)| g.value() == b.value()) {
            Some((_, m)) => *m += 1.0,
            None => grouped.push((b.clone(), 1.0)),
        }
    }
    grouped.sort_by(|a, b| b.0.value().partial_cmp(&a.0.value()).unwrap());
    grouped
}

/// The real root of `sum_j c_j r_j^s = 1`, the similarity dimension.
///
/// With a single ratio of multiplicity one the root is zero; with total
/// multiplicity above one the left side decreases from above one, so plain
/// bisection on `[0, hi]` converges.  Ratios summing below one put the root
/// in `[0, 1)`.
fn self_similar_dimension(ratios: &[(f64, f64)]) -> f64 {
    let mass: f64 = ratios.iter().map(|(_, m)| *m).sum();
    if mass <= 1.0 {
        return 0.0;
    }
    let f = |s: f64| -> f64 {
        1.0 - ratios
            .iter()
            .map(|(r, m)| m * r.powf(s))
            .sum::<f64>()
    };
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
