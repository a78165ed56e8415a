//! Lazy enumeration of length sequences.
//!
//! Each provenance gets its own generator, all surfaced through the
//! [`Lengths`] iterator yielding `(length, multiplicity)` pairs with strictly
//! decreasing lengths.  Self-similar strings are the only nontrivial case: a
//! max-heap over ratio-exponent multisets produces lengths in descending
//! order, and entries whose values collide (lattice strings produce the same
//! product along many words) are merged on the way out.

use crate::{FractalString, Provenance};
use std::collections::BinaryHeap;

/// Relative tolerance under which two enumerated lengths are considered the
/// same and their multiplicities merged.  Distinct ratio products that agree
/// mathematically can differ by a few ulps when evaluated along different
/// exponent vectors.
const MERGE_REL: f64 = 1e-12;

/// Iterator over `(length, multiplicity)` in strictly decreasing length
/// order.  Effectively infinite for every provenance except
/// [`Provenance::Explicit`]; callers apply their own cutoffs.  As a safety
/// net the stream ends if a length underflows `f64` entirely.
pub struct Lengths<'a> {
    backend: Backend<'a>,
}

enum Backend<'a> {
    Explicit {
        items: std::slice::Iter<'a, (f64, f64)>,
    },
    /// Lengths `first * a^k` with multiplicity `mult0 * 2^k`.
    Geometric {
        len: f64,
        mult: f64,
        ratio: f64,
    },
    PowerTail {
        a: f64,
        j: u64,
    },
    SelfSimilar(SelfSimIter),
    Oscillating {
        dim: f64,
        tau: f64,
        beta: f64,
        j: u64,
        prev_x: f64,
    },
}

impl FractalString {
    /// Lazily enumerates the length sequence in descending order.
    pub fn lengths(&self) -> Lengths<'_> {
        let backend = match self.provenance() {
            Provenance::Explicit => Backend::Explicit {
                items: self.explicit_table().iter(),
            },
            Provenance::Cantor => Backend::Geometric {
                len: 1.0 / 3.0,
                mult: 1.0,
                ratio: 1.0 / 3.0,
            },
            Provenance::GeneralizedCantor { a } => Backend::Geometric {
                len: 1.0 - 2.0 * a,
                mult: 1.0,
                ratio: *a,
            },
            Provenance::PowerTail { a } => Backend::PowerTail { a: *a, j: 1 },
            Provenance::SelfSimilar { ratios, gaps } => {
                Backend::SelfSimilar(SelfSimIter::new(ratios, gaps))
            }
            Provenance::OscillatingCounting { dim, tau, beta } => Backend::Oscillating {
                dim: *dim,
                tau: *tau,
                beta: *beta,
                j: 1,
                prev_x: 0.0,
            },
        };
        Lengths { backend }
    }
}

impl Iterator for Lengths<'_> {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        match &mut self.backend {
            Backend::Explicit { items } => items.next().copied(),
            Backend::Geometric { len, mult, ratio } => {
                if *len < f64::MIN_POSITIVE {
                    return None;
                }
                let out = (*len, *mult);
                *len *= *ratio;
                *mult *= 2.0;
                Some(out)
            }
            Backend::PowerTail { a, j } => {
                let l = power_tail_length(*a, *j);
                *j += 1;
                (l >= f64::MIN_POSITIVE).then_some((l, 1.0))
            }
            Backend::SelfSimilar(iter) => iter.next(),
            Backend::Oscillating {
                dim,
                tau,
                beta,
                j,
                prev_x,
            } => {
                let x = invert_profile(*dim, *tau, *beta, *j as f64, *prev_x);
                *prev_x = x;
                *j += 1;
                Some((1.0 / x, 1.0))
            }
        }
    }
}

/// `j^-a - (j+1)^-a` evaluated without cancellation: the difference is
/// rewritten as `j^-a * (-expm1(-a log1p(1/j)))`.
pub(crate) fn power_tail_length(a: f64, j: u64) -> f64 {
    let jf = j as f64;
    jf.powf(-a) * (-(-a * (1.0 / jf).ln_1p()).exp_m1())
}

/// The oscillating counting profile `V(x) = x^dim (1 + 2 beta cos(tau log x))`.
pub(crate) fn profile(dim: f64, tau: f64, beta: f64, x: f64) -> f64 {
    x.powf(dim) * (1.0 + 2.0 * beta * (tau * x.ln()).cos())
}

/// Solves `V(x) = target` for the strictly increasing profile `V`.
///
/// The bracket comes from the amplitude bound `V(x)/x^dim` in
/// `[1 - 2 beta, 1 + 2 beta]`.  Iteration is safeguarded Newton: steps that
/// leave the shrinking bracket fall back to its midpoint, so the worst case
/// is plain bisection while the typical sequential call (warm-started from
/// the previous abscissa) converges in a handful of steps to relative
/// accuracy near machine precision.
pub(crate) fn invert_profile(dim: f64, tau: f64, beta: f64, target: f64, warm: f64) -> f64 {
    let mut lo = (target / (1.0 + 2.0 * beta)).powf(1.0 / dim).max(warm);
    let mut hi = (target / (1.0 - 2.0 * beta)).powf(1.0 / dim);
    debug_assert!(profile(dim, tau, beta, hi) >= target * (1.0 - 1e-9));
    let mut x = if warm > 0.0 && target > 1.0 {
        // The previous abscissa scaled by the smooth-profile increment.
        (warm * (target / (target - 1.0)).powf(1.0 / dim)).clamp(lo, hi)
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..120 {
        let u = x.ln();
        let f = profile(dim, tau, beta, x) - target;
        if f == 0.0 {
            return x;
        }
        if f > 0.0 {
            hi = x.min(hi);
        } else {
            lo = x.max(lo);
        }
        let df = x.powf(dim - 1.0)
            * (dim + 2.0 * beta * dim * (tau * u).cos() - 2.0 * beta * tau * (tau * u).sin());
        let step = f / df;
        if step.abs() <= 1e-15 * x || hi - lo <= 4.0 * f64::EPSILON * hi {
            return x;
        }
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        x = next;
    }
    x
}

/// Heap entry: one ratio-exponent multiset applied to one gap.
///
/// `mult` carries the full word count, gap multiplicity times the multinomial
/// coefficient times the product of ratio multiplicities.  `floor_idx` is the
/// smallest ratio index this entry may still extend by, which makes every
/// multiset reachable along exactly one path.
struct Entry {
    len: f64,
    mult: f64,
    word_len: u32,
    exponents: Vec<u16>,
    floor_idx: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len.total_cmp(&other.len)
    }
}

struct SelfSimIter {
    ratios: Vec<(f64, f64)>,
    heap: BinaryHeap<Entry>,
}

impl SelfSimIter {
    fn new(ratios: &[(f64, f64)], gaps: &[(f64, f64)]) -> Self {
        let mut heap = BinaryHeap::new();
        for &(g, d) in gaps {
            heap.push(Entry {
                len: g,
                mult: d,
                word_len: 0,
                exponents: vec![0; ratios.len()],
                floor_idx: 0,
            });
        }
        SelfSimIter {
            ratios: ratios.to_vec(),
            heap,
        }
    }

    fn push_children(&mut self, entry: &Entry) {
        for idx in entry.floor_idx..self.ratios.len() {
            let (r, c) = self.ratios[idx];
            let new_exp = (entry.exponents[idx] + 1) as f64;
            // multinomial(n+1; e + delta_idx) = multinomial(n; e) * (n+1) / (e_idx+1),
            // so the stored product updates by the same factor times the ratio
            // count.  Counts stay exact integers until 2^53, far past any
            // word depth the length cutoffs admit.
            let mult = entry.mult * (entry.word_len as f64 + 1.0) * c / new_exp;
            let mut exponents = entry.exponents.clone();
            exponents[idx] += 1;
            self.heap.push(Entry {
                len: entry.len * r,
                mult,
                word_len: entry.word_len + 1,
                exponents,
                floor_idx: idx,
            });
        }
    }
}

impl Iterator for SelfSimIter {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        let top = self.heap.pop()?;
        if top.len < f64::MIN_POSITIVE {
            return None;
        }
        let len = top.len;
        let mut mult = top.mult;
        self.push_children(&top);
        while let Some(peeked) = self.heap.peek() {
            if peeked.len < len * (1.0 - MERGE_REL) {
                break;
            }
            let same = self.heap.pop().unwrap();
            mult += same.mult;
            self.push_children(&same);
        }
        Some((len, mult))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FractalString;
    use approx::assert_relative_eq;
    use fzeta_expr::Base;

    #[test]
    fn cantor_lengths_match_the_ternary_construction() {
        let s = FractalString::cantor();
        let got: Vec<(f64, f64)> = s.lengths().take(4).collect();
        assert_eq!(got[0], (1.0 / 3.0, 1.0));
        assert_eq!(got[1].1, 2.0);
        assert_relative_eq!(got[1].0, 1.0 / 9.0, epsilon = 1e-16);
        assert_eq!(got[3].1, 8.0);
        assert_relative_eq!(got[3].0, 1.0 / 81.0, epsilon = 1e-16);
    }

    #[test]
    fn power_tail_matches_direct_difference_at_small_index() {
        for j in 1..50u64 {
            let direct = (j as f64).powf(-1.5) - ((j + 1) as f64).powf(-1.5);
            assert_relative_eq!(power_tail_length(1.5, j), direct, max_relative = 1e-12);
        }
    }

    #[test]
    fn self_similar_heap_agrees_with_brute_force_expansion() {
        let s = FractalString::self_similar(
            &[Base::Rational(1, 2), Base::Rational(1, 4)],
            &[Base::Rational(1, 4)],
        )
        .unwrap();

        // Expand every word of length at most 15 directly.
        let ratios = [0.5, 0.25];
        let mut brute: Vec<f64> = Vec::new();
        let mut frontier = vec![0.25f64];
        for _ in 0..15 {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for &l in &frontier {
                for r in ratios {
                    next.push(l * r);
                }
            }
            brute.extend_from_slice(&frontier);
            frontier = next;
        }
        brute.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for l in brute {
            match merged.last_mut() {
                Some((prev, m)) if (*prev - l).abs() <= 1e-12 * l => *m += 1.0,
                _ => merged.push((l, 1.0)),
            }
        }

        for (got, want) in s.lengths().take(12).zip(merged.iter()) {
            assert_relative_eq!(got.0, want.0, max_relative = 1e-12);
            assert_eq!(got.1, want.1, "multiplicity at length {}", want.0);
        }
    }

    #[test]
    fn oscillating_lengths_invert_the_profile() {
        let s = FractalString::oscillating_counting(0.5, 2.0, 0.05).unwrap();
        let (dim, tau, beta) = (0.5, 2.0, 0.05);
        for (j, (l, m)) in s.lengths().take(200).enumerate() {
            assert_eq!(m, 1.0);
            let v = profile(dim, tau, beta, 1.0 / l);
            assert_relative_eq!(v, (j + 1) as f64, max_relative = 1e-12);
        }
    }

    #[test]
    fn all_families_enumerate_nonincreasing() {
        let strings = vec![
            FractalString::cantor(),
            FractalString::generalized_cantor(0.4).unwrap(),
            FractalString::a_string(0.7).unwrap(),
            FractalString::self_similar(
                &[Base::Rational(1, 3), Base::Rational(2, 7)],
                &[Base::Rational(1, 5), Base::Rational(1, 9)],
            )
            .unwrap(),
            FractalString::oscillating_counting(0.6, 3.0, 0.04).unwrap(),
        ];
        for s in &strings {
            let mut prev = f64::INFINITY;
            for (l, _) in s.lengths().take(3000) {
                assert!(
                    l <= prev * (1.0 + 1e-12),
                    "length {l} above predecessor {prev}"
                );
                prev = l;
            }
        }
    }
}
