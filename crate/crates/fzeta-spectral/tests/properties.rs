//! Structural properties of frequency counting and the zeta evaluator.

use fzeta_expr::Base;
use fzeta_spectral::{frequency_count, frequency_count_folded, riemann_zeta, weyl_term};
use fzeta_strings::FractalString;
use num_complex::Complex64;
use proptest::prelude::*;

fn golden() -> FractalString {
    FractalString::self_similar(
        &[Base::rational(1, 2), Base::rational(1, 4)],
        &[Base::rational(1, 4)],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    /// Counts never decrease and never exceed the Weyl term rounded the
    /// obvious way: each interval holds at most `x l` frequencies.
    #[test]
    fn counts_are_monotone_and_below_weyl(a in 0.6f64..2.5, lo in 2.0f64..500.0, step in 1.01f64..4.0) {
        let s = FractalString::a_string(a).unwrap();
        let hi = lo * step;
        let n_lo = frequency_count(&s, lo).unwrap();
        let n_hi = frequency_count(&s, hi).unwrap();
        prop_assert!(n_lo <= n_hi);
        prop_assert!(n_hi <= weyl_term(&s, hi) + 1e-9);
    }

    /// The harmonic fold is an independent route to the same integer.
    #[test]
    fn harmonic_folding_agrees_on_the_golden_string(x in 1.5f64..900.0) {
        let s = golden();
        let direct = frequency_count(&s, x).unwrap();
        let folded = frequency_count_folded(&s, x).unwrap();
        prop_assert!((direct - folded).abs() < 1e-9 * (1.0 + direct));
    }

    /// Zeta values respect conjugate symmetry and stay finite across the
    /// working strip.
    #[test]
    fn zeta_is_finite_and_conjugate_symmetric(re in -0.9f64..3.0, im in 0.1f64..40.0) {
        prop_assume!((re - 1.0).abs() > 0.05 || im > 0.05);
        let s = Complex64::new(re, im);
        let a = riemann_zeta(s).unwrap();
        let b = riemann_zeta(s.conj()).unwrap();
        prop_assert!(a.re.is_finite() && a.im.is_finite());
        prop_assert!((a.conj() - b).norm() < 1e-11 * (1.0 + a.norm()));
    }
}
