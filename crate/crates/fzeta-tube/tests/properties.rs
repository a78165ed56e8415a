use approx::assert_relative_eq;
use fzeta_moran::Window;
use fzeta_spray::{ball_volume, catalog_entries, catalog_get, CatalogParams};
use fzeta_strings::FractalString;
use fzeta_tube::{
    classify_entry, series_for_entry, series_for_string, standard_window,
    ContentVerdict, Fractality, TubeError,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    /// Sphere tube volumes are plain binomials, so the expansion built
    /// from the catalog poles must reproduce them to round-off for every
    /// dimension and depth.
    #[test]
    fn sphere_expansions_are_exact(
        n in 1u32..=8,
        delta in 0.3f64..1.0,
        frac in 0.02f64..1.0,
    ) {
        let entry = catalog_get(
            "sphere",
            &CatalogParams { n: Some(n), delta: Some(delta) },
        ).unwrap();
        let window = Window::new(-0.5, n as f64 + 0.5, -1.0, 1.0);
        let series = series_for_entry(&entry, &window, delta).unwrap();
        let eps = frac * delta;
        let exact = ball_volume(n)
            * ((1.0 + eps).powi(n as i32) - (1.0 - eps).powi(n as i32));
        prop_assert!((series.eval(eps).unwrap() - exact).abs() <= 1e-11 * (1.0 + exact));
    }

    /// Two-copy Cantor strings with arbitrary contraction ratio: the
    /// synthesized expansion has to follow the exact tube volume across
    /// the whole deep range, not just for the classical ratio 1/3.
    #[test]
    fn generalized_cantor_expansions_track_exact_volumes(
        a in 0.15f64..0.45,
        t in 0.0f64..1.0,
    ) {
        let s = FractalString::generalized_cantor(a).unwrap();
        let period = 2.0 * std::f64::consts::PI / (1.0 / a).ln();
        let window = standard_window(1, period, 150);
        let gap = 1.0 - 2.0 * a;
        let hi = 0.4 * gap / 2.0;
        let series = series_for_string(&s, &window, hi).unwrap();
        let lo: f64 = 1e-4;
        let eps = lo * (hi / lo).powf(t);
        let exact = s.tube_exact(eps).unwrap();
        let predicted = series.eval(eps).unwrap();
        prop_assert!(
            ((predicted - exact) / exact).abs() <= 1e-3,
            "a = {}, eps = {}: predicted {}, exact {}", a, eps, predicted, exact
        );
    }
}

/// Coefficients must not depend on how many conjugate pairs the window
/// catches: a taller window only appends terms.
#[test]
fn window_height_only_appends_terms() {
    let s = FractalString::cantor();
    let period = 2.0 * std::f64::consts::PI / 3f64.ln();
    let short = series_for_string(&s, &standard_window(1, period, 12), 1.0 / 6.0).unwrap();
    let tall = series_for_string(&s, &standard_window(1, period, 40), 1.0 / 6.0).unwrap();
    assert!(tall.terms().len() > short.terms().len());
    for term in short.terms() {
        let twin = tall.term_at(term.omega).expect("term lost in the taller window");
        assert_eq!(term.log_coeffs.len(), twin.log_coeffs.len());
        for (a, b) in term.log_coeffs.iter().zip(&twin.log_coeffs) {
            assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }
}

/// Every catalog entry either classifies cleanly, with a verdict coherent
/// with its stored divisor, or fails for lack of data, never incoherently.
#[test]
fn catalog_verdicts_are_coherent() {
    let mut classified = 0;
    for name in catalog_entries() {
        let entry = catalog_get(name, &CatalogParams::default()).unwrap();
        match classify_entry(&entry) {
            Ok(v) => {
                classified += 1;
                assert_relative_eq!(v.dimension, entry.dimension, epsilon = 1e-12);
                let has_families = !entry.divisor.families().is_empty();
                match v.fractal {
                    Fractality::NotFractal => assert!(!has_families, "{name}"),
                    _ => assert!(has_families, "{name}"),
                }
                if let ContentVerdict::Measurable { content } = v.content {
                    assert!(content > 0.0, "{name}: content {content}");
                }
            }
            Err(TubeError::Invalid(_)) | Err(TubeError::NoClosedForm) => {
                // Entries listing only a pole set cannot produce a content.
                assert!(
                    entry.residues.is_empty() || entry.zeta.is_none(),
                    "{name} has data but failed to classify"
                );
            }
            Err(other) => panic!("{name}: unexpected failure {other}"),
        }
    }
    assert!(classified >= 9, "only {classified} entries classified");
}
