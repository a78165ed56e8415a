//! Tube formulas from complex dimensions.
//!
//! The pole set of a fractal zeta function determines the asymptotics of
//! the tube volume `V(eps)`: each pole `omega` of order `m` contributes
//! `eps^(N - omega)` times a polynomial of degree `m - 1` in `log(1/eps)`.
//! This crate turns closed-form zetas and their divisors into evaluable
//! expansions, and reads measurability off the pole at the dimension:
//! simple and alone means a true Minkowski content, companions on the
//! critical line mean oscillation between distinct upper and lower
//! contents, a multiple pole means the content only exists against a
//! logarithmic gauge.

mod classify;
mod series;

pub use classify::{
    classify_entry, classify_string, lattice_contents, ContentBand, ContentVerdict,
    Fractality, Verdict,
};
pub use series::{
    series_for_entry, series_for_string, series_from_parts, standard_window,
    string_divisor, TubeNormalization, TubeSeries, TubeTerm,
};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TubeError {
    /// The object has no closed-form zeta to expand.
    #[error("no closed-form zeta function is available")]
    NoClosedForm,

    /// An expansion was evaluated beyond its validity radius.
    #[error("eps = {eps} lies outside the expansion's validity (0, {valid_to}]")]
    OutsideValidity { eps: f64, valid_to: f64 },

    /// Laurent extraction needs a contour separating the pole from its
    /// neighbors, and none fits.
    #[error("pole at {location} has only {clearance:.3e} clearance to its neighbors")]
    PoleTooClose { location: Complex64, clearance: f64 },

    /// A band computation was asked of a string without lattice structure.
    #[error("the string's scales are not powers of one common ratio")]
    NotLattice,

    /// Structurally invalid input.
    #[error("invalid tube computation: {0}")]
    Invalid(String),

    /// String enumeration or evaluation failed underneath.
    #[error(transparent)]
    String(#[from] fzeta_strings::StringError),

    /// Root finding or lattice classification failed underneath.
    #[error(transparent)]
    Moran(#[from] fzeta_moran::MoranError),

    /// Divisor or catalog access failed underneath.
    #[error(transparent)]
    Spray(#[from] fzeta_spray::SprayError),

    /// Expression evaluation or contour integration failed underneath.
    #[error(transparent)]
    Expr(#[from] fzeta_expr::ExprError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use fzeta_expr::laurent_coeffs;
    use fzeta_moran::Window;
    use fzeta_spray::{catalog_get, CatalogParams, MonophaseGenerator};
    use fzeta_strings::FractalString;
    use num_complex::Complex64;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn entry(name: &str) -> fzeta_spray::CatalogEntry {
        catalog_get(name, &CatalogParams::default()).unwrap()
    }

    fn entry_n(name: &str, n: u32) -> fzeta_spray::CatalogEntry {
        catalog_get(name, &CatalogParams { n: Some(n), ..Default::default() }).unwrap()
    }

    #[test]
    fn interval_expansion_reproduces_its_tube_volume_exactly() {
        let e = entry("unit-interval");
        let series =
            series_for_entry(&e, &Window::new(-0.5, 1.5, -1.0, 1.0), 1.0).unwrap();
        for eps in [0.04, 0.3, 0.77, 1.0] {
            assert_relative_eq!(series.eval(eps).unwrap(), 1.0 + 2.0 * eps, epsilon = 1e-13);
        }
    }

    #[test]
    fn sphere_expansion_reproduces_the_binomial_volume() {
        let e = entry_n("sphere", 3);
        let series =
            series_for_entry(&e, &Window::new(-0.5, 3.5, -1.0, 1.0), 1.0).unwrap();
        let theta = fzeta_spray::ball_volume(3);
        for eps in [0.03f64, 0.4, 0.9] {
            let exact = theta * ((1.0 + eps).powi(3) - (1.0 - eps).powi(3));
            assert_relative_eq!(series.eval(eps).unwrap(), exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn circle_relative_expansion_matches_the_disk_generator() {
        let e = entry_n("sphere-in-ball", 2);
        let series =
            series_for_entry(&e, &Window::new(-0.5, 2.5, -1.0, 1.0), 1.0).unwrap();
        let disk = MonophaseGenerator::disk(fzeta_expr::Base::rational(1, 1));
        for eps in [0.05, 0.2, 0.6, 1.0] {
            assert_relative_eq!(
                series.eval(eps).unwrap(),
                disk.tube_volume(eps),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn cantor_string_expansion_tracks_the_exact_tube_volume() {
        let s = FractalString::cantor();
        let window = standard_window(1, 2.0 * std::f64::consts::PI / 3f64.ln(), 200);
        let series = series_for_string(&s, &window, 1.0 / 6.0).unwrap();
        let lo: f64 = 1e-5;
        let hi: f64 = 1.0 / 6.0;
        for i in 0..200 {
            let t = i as f64 / 199.0;
            let eps = lo * (hi / lo).powf(t);
            let exact = s.tube_exact(eps).unwrap();
            let predicted = series.eval(eps).unwrap();
            assert!(
                ((predicted - exact) / exact).abs() <= 1e-4,
                "eps = {eps}: predicted {predicted}, exact {exact}"
            );
        }
    }

    #[test]
    fn catalog_cantor_entry_agrees_with_the_string_expansion() {
        let e = entry("cantor-string");
        let period = 2.0 * std::f64::consts::PI / 3f64.ln();
        let window = standard_window(1, period, 60);
        let from_entry = series_for_entry(&e, &window, 1.0 / 6.0).unwrap();
        let from_string =
            series_for_string(&FractalString::cantor(), &window, 1.0 / 6.0).unwrap();
        for eps in [1e-4, 1e-3, 0.01, 0.05, 0.16] {
            assert_relative_eq!(
                from_entry.eval(eps).unwrap(),
                from_string.eval(eps).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn generalized_cantor_expansion_tracks_the_exact_tube_volume() {
        let s = FractalString::generalized_cantor(0.4).unwrap();
        let period = 2.0 * std::f64::consts::PI / (1.0f64 / 0.4).ln();
        let window = standard_window(1, period, 200);
        let series = series_for_string(&s, &window, 0.1).unwrap();
        let lo: f64 = 1e-5;
        let hi: f64 = 0.1;
        for i in 0..80 {
            let t = i as f64 / 79.0;
            let eps = lo * (hi / lo).powf(t);
            let exact = s.tube_exact(eps).unwrap();
            let predicted = series.eval(eps).unwrap();
            assert!(
                ((predicted - exact) / exact).abs() <= 2e-4,
                "eps = {eps}: predicted {predicted}, exact {exact}"
            );
        }
    }

    #[test]
    fn two_scale_lattice_expansion_tracks_the_exact_tube_volume() {
        use fzeta_expr::Base;
        let s = FractalString::self_similar(
            &[Base::rational(1, 2), Base::rational(1, 4)],
            &[Base::rational(1, 4)],
        )
        .unwrap();
        let period = 2.0 * std::f64::consts::PI / 2f64.ln();
        // The scaling polynomial 1 - 2^-s - 4^-s has a second root line at
        // -log_2 phi, below the default window floor; without it the
        // expansion is short one power of eps.
        let half = 120.5 * period;
        let window = Window::new(-1.5, 1.5, -half, half);
        let series = series_for_string(&s, &window, 0.05).unwrap();
        let lo: f64 = 1e-5;
        let hi: f64 = 0.05;
        for i in 0..60 {
            let t = i as f64 / 59.0;
            let eps = lo * (hi / lo).powf(t);
            let exact = s.tube_exact(eps).unwrap();
            let predicted = series.eval(eps).unwrap();
            assert!(
                ((predicted - exact) / exact).abs() <= 2e-4,
                "eps = {eps}: predicted {predicted}, exact {exact}"
            );
        }
    }

    #[test]
    fn half_square_expansion_carries_the_log_term() {
        let e = entry("half-square");
        let period = 2.0 * std::f64::consts::PI / 2f64.ln();
        let series = series_for_entry(&e, &standard_window(2, period, 30), 0.5).unwrap();
        let term = series.term_at(cx(1.0, 0.0)).unwrap();
        assert_eq!(term.log_coeffs.len(), 2);
        let c2 = 1.0 / (4.0 * 2f64.ln());
        assert_relative_eq!(term.log_coeffs[1].re, c2, epsilon = 1e-9);
        assert_relative_eq!(term.log_coeffs[0].re, 29.0 / 8.0, epsilon = 1e-9);
        assert!(term.log_coeffs[1].im.abs() < 1e-10);
    }

    #[test]
    fn cantor_graph_oscillation_is_log_periodic() {
        let e = entry("cantor-graph");
        let period = 2.0 * std::f64::consts::PI / 3f64.ln();
        let series = series_for_entry(&e, &standard_window(2, period, 80), 0.3).unwrap();
        let d = 2f64.ln() / 3f64.ln();
        let osc = |eps: f64| {
            (series.eval(eps).unwrap() - 2.0 * eps - eps * eps) / eps.powf(2.0 - d)
        };
        for eps in [0.002, 0.011, 0.07] {
            assert_relative_eq!(osc(eps), osc(eps / 3.0), epsilon = 1e-9);
            // A quarter period later the oscillation must differ, or the
            // expansion would be degenerate.
            assert!((osc(eps) - osc(eps * 3f64.powf(0.25))).abs() > 1e-4);
        }
    }

    #[test]
    fn expansion_rejects_radii_beyond_validity() {
        let e = entry("unit-interval");
        let series =
            series_for_entry(&e, &Window::new(-0.5, 1.5, -1.0, 1.0), 1.0).unwrap();
        assert!(matches!(
            series.eval(1.5),
            Err(TubeError::OutsideValidity { .. })
        ));
        assert!(matches!(series.eval(0.0), Err(TubeError::OutsideValidity { .. })));
    }

    #[test]
    fn gasket_is_critically_fractal_and_not_measurable() {
        let v = classify_entry(&entry("sierpinski-gasket")).unwrap();
        assert_eq!(v.fractal, Fractality::Critical);
        let d = 3f64.ln() / 2f64.ln();
        assert_relative_eq!(v.dimension, d, epsilon = 1e-12);
        match v.content {
            ContentVerdict::NotMeasurable { average } => {
                let e = entry("sierpinski-gasket");
                let zeta = e.zeta.as_ref().unwrap();
                let res = fzeta_expr::residue_simple(zeta, cx(d, 0.0)).unwrap().re;
                assert_relative_eq!(average, res / (2.0 - d), epsilon = 1e-9);
                assert!(average > 0.0);
            }
            other => panic!("expected an oscillating verdict, got {other:?}"),
        }
    }

    #[test]
    fn cantor_graph_is_measurable_with_content_two_and_subcritical() {
        let v = classify_entry(&entry("cantor-graph")).unwrap();
        assert_eq!(v.dimension, 1.0);
        match v.content {
            ContentVerdict::Measurable { content } => {
                assert_relative_eq!(content, 2.0, epsilon = 1e-10)
            }
            other => panic!("expected measurable, got {other:?}"),
        }
        match v.fractal {
            Fractality::Subcritical { exponent } => {
                assert_relative_eq!(exponent, 2f64.ln() / 3f64.ln(), epsilon = 1e-12)
            }
            other => panic!("expected subcritical, got {other:?}"),
        }
    }

    #[test]
    fn half_square_needs_the_log_gauge() {
        let v = classify_entry(&entry("half-square")).unwrap();
        match v.content {
            ContentVerdict::LogGauge { power, content } => {
                assert_eq!(power, 1);
                assert_relative_eq!(content, 1.0 / (4.0 * 2f64.ln()), epsilon = 1e-9);
            }
            other => panic!("expected a log gauge, got {other:?}"),
        }
        assert_eq!(v.fractal, Fractality::Critical);
    }

    #[test]
    fn sphere_in_ball_is_measurable_and_not_fractal() {
        let v = classify_entry(&entry_n("sphere-in-ball", 3)).unwrap();
        assert_eq!(v.fractal, Fractality::NotFractal);
        match v.content {
            ContentVerdict::Measurable { content } => {
                assert_relative_eq!(
                    content,
                    3.0 * fzeta_spray::ball_volume(3),
                    epsilon = 1e-12
                );
            }
            other => panic!("expected measurable, got {other:?}"),
        }
    }

    #[test]
    fn third_square_is_measurable_with_content_sixteen() {
        let v = classify_entry(&entry("third-square")).unwrap();
        match v.content {
            ContentVerdict::Measurable { content } => {
                assert_relative_eq!(content, 16.0, epsilon = 1e-12)
            }
            other => panic!("expected measurable, got {other:?}"),
        }
        match v.fractal {
            Fractality::Subcritical { exponent } => {
                assert_relative_eq!(exponent, 2f64.ln() / 3f64.ln(), epsilon = 1e-12)
            }
            other => panic!("expected subcritical, got {other:?}"),
        }
    }

    #[test]
    fn power_tail_string_is_measurable() {
        let s = FractalString::a_string(1.0).unwrap();
        let v = classify_string(&s).unwrap();
        assert_relative_eq!(v.dimension, 0.5, epsilon = 1e-12);
        assert_eq!(v.fractal, Fractality::NotFractal);
        match v.content {
            ContentVerdict::Measurable { content } => {
                assert_relative_eq!(content, 2.0 * 2f64.sqrt(), epsilon = 1e-12)
            }
            other => panic!("expected measurable, got {other:?}"),
        }
    }

    #[test]
    fn cantor_string_is_critical_with_the_known_average() {
        let v = classify_string(&FractalString::cantor()).unwrap();
        assert_eq!(v.fractal, Fractality::Critical);
        let d = 2f64.ln() / 3f64.ln();
        match v.content {
            ContentVerdict::NotMeasurable { average } => {
                let expected = 2f64.powf(1.0 - d) / (d * (1.0 - d)) / (2.0 * 3f64.ln());
                assert_relative_eq!(average, expected, epsilon = 1e-10);
            }
            other => panic!("expected an oscillating verdict, got {other:?}"),
        }
    }

    #[test]
    fn nonlattice_string_is_measurable() {
        use fzeta_expr::Base;
        let s = FractalString::self_similar(
            &[Base::rational(1, 2), Base::rational(1, 3)],
            &[Base::rational(1, 6)],
        )
        .unwrap();
        let v = classify_string(&s).unwrap();
        assert_relative_eq!(v.dimension, 0.7878849110258698, epsilon = 1e-9);
        match v.content {
            ContentVerdict::Measurable { content } => assert!(content > 0.0),
            other => panic!("expected measurable, got {other:?}"),
        }
        match v.fractal {
            Fractality::Subcritical { exponent } => {
                assert!(exponent < v.dimension);
                assert!(exponent > v.dimension - 1.0);
            }
            other => panic!("expected subcritical, got {other:?}"),
        }
    }

    #[test]
    fn cantor_contents_hit_the_closed_interval_bounds() {
        let band = lattice_contents(&FractalString::cantor(), 2048).unwrap();
        let d = 2f64.ln() / 3f64.ln();
        let lower = (1.0 / d) * (2.0 * d / (1.0 - d)).powf(1.0 - d);
        let upper = 2f64.powf(2.0 - d);
        assert_relative_eq!(band.lower, lower, epsilon = 1e-3);
        assert_relative_eq!(band.upper, upper, epsilon = 1e-3);
        assert!(band.lower < band.upper);
    }

    #[test]
    fn generalized_cantor_contents_hit_their_closed_forms() {
        let a: f64 = 0.4;
        let s = FractalString::generalized_cantor(a).unwrap();
        let band = lattice_contents(&s, 2048).unwrap();
        let d = 2f64.ln() / (1.0 / a).ln();
        let lower = (1.0 / d) * (2.0 * d / (1.0 - d)).powf(1.0 - d);
        let upper = 2.0 * (1.0 - a) * (0.5 - a).powf(d - 1.0);
        assert_relative_eq!(band.lower, lower, epsilon = 1e-3);
        assert_relative_eq!(band.upper, upper, epsilon = 1e-3);
    }

    #[test]
    fn band_computation_refuses_nonlattice_strings() {
        use fzeta_expr::Base;
        let s = FractalString::self_similar(
            &[Base::rational(1, 2), Base::rational(1, 3)],
            &[Base::rational(1, 6)],
        )
        .unwrap();
        assert!(matches!(lattice_contents(&s, 256), Err(TubeError::NotLattice)));
        assert!(matches!(
            lattice_contents(&FractalString::a_string(1.0).unwrap(), 256),
            Err(TubeError::NotLattice)
        ));
    }

    #[test]
    fn half_square_laurent_data_flows_into_the_verdict() {
        // The gauge content equals the leading Laurent coefficient of the
        // catalog closed form at the double pole, so both extraction paths
        // must agree to contour accuracy.
        let e = entry("half-square");
        let zeta = e.zeta.as_ref().unwrap();
        let c = laurent_coeffs(zeta, cx(1.0, 0.0), 0.4, -2, -2).unwrap()[0];
        match classify_entry(&e).unwrap().content {
            ContentVerdict::LogGauge { content, .. } => {
                assert_relative_eq!(content, c.re, epsilon = 1e-11)
            }
            other => panic!("expected a log gauge, got {other:?}"),
        }
    }
}
