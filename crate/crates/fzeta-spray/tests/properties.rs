//! Randomized invariants for generators, sprays and divisors, plus the
//! seeded reconstruction check that ties the stock sprays to their catalog
//! closed forms.

use fzeta_expr::Base;
use fzeta_moran::{DirichletPolynomial, Window};
use fzeta_spray::{catalog_get, CatalogParams, Divisor, MonophaseGenerator, SelfSimilarSpray};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn arb_shape() -> impl Strategy<Value = MonophaseGenerator> {
    (0usize..5, 0.1f64..3.0).prop_map(|(which, size)| match which {
        0 => MonophaseGenerator::interval(Base::real(size)),
        1 => MonophaseGenerator::square(Base::real(size)),
        2 => MonophaseGenerator::equilateral_triangle(Base::real(size)),
        3 => MonophaseGenerator::disk(Base::real(size)),
        _ => MonophaseGenerator::cube(Base::real(size)),
    })
}

fn arb_scales() -> impl Strategy<Value = DirichletPolynomial> {
    prop::collection::vec(0.1f64..0.42, 1..=2).prop_map(|ratios| {
        DirichletPolynomial::from_scales(ratios.into_iter().map(Base::real).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn scaling_a_generator_scales_its_zeta(
        shape in arb_shape(),
        lambda_idx in 0usize..3,
        re_off in 0.3f64..2.0,
        im in -10.0f64..10.0,
    ) {
        let lambda: f64 = [2.0, 1.0 / 3.0, 1.4][lambda_idx];
        let s = cx((shape.ambient() - 1) as f64 + re_off, im);
        let want = (s * lambda.ln()).exp() * shape.zeta_at(s);
        let got = shape.scaled(lambda).zeta_at(s);
        prop_assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()));
    }

    #[test]
    fn tube_volume_is_monotone_and_saturates(
        shape in arb_shape(),
        lo in 0.0f64..1.0,
        step in 0.0f64..1.0,
    ) {
        let g = shape.inradius().value();
        let e1 = lo * g;
        let e2 = e1 + step * g;
        prop_assert!(shape.tube_volume(e1) <= shape.tube_volume(e2) + 1e-12);
        prop_assert!((shape.tube_volume(2.0 * g) - shape.volume()).abs() <= 1e-12);
    }

    #[test]
    fn spray_zeta_satisfies_its_own_functional_equation(
        shape in arb_shape(),
        scales in arb_scales(),
    ) {
        let spray = SelfSimilarSpray::new(shape, scales).unwrap();
        let n = spray.generator().ambient() as f64;
        let samples: Vec<Complex64> =
            (0..6).map(|j| cx(n + 0.7 + 0.3 * j as f64, 3.0 * j as f64 + 0.5)).collect();
        let worst = spray
            .functional_equation_residual(&spray.zeta(), &samples)
            .unwrap();
        prop_assert!(worst <= 1e-12, "worst defect {worst}");
    }

    #[test]
    fn window_enumeration_stays_inside_and_sorted(
        res in prop::collection::vec(-4i8..=4, 1..6),
        ims in prop::collection::vec(-4i8..=4, 1..6),
        base_re in -2i8..=2,
        period_q in 1u8..=4,
    ) {
        let mut div = Divisor::default();
        for (&r, &i) in res.iter().zip(&ims) {
            div.push_point(cx(r as f64 * 0.5, i as f64 * 0.5), 1);
        }
        div.push_family(fzeta_spray::PeriodicPoles {
            base: cx(base_re as f64 * 0.5, 0.0),
            period: period_q as f64 * 0.5,
            order: 1,
        });
        let w = Window::new(-1.3, 1.3, -2.1, 2.1);
        let pts = div.points_in(&w);
        for (z, ord) in &pts {
            prop_assert!(*ord >= 1);
            prop_assert!(z.re >= w.re_min - 1e-6 && z.re <= w.re_max + 1e-6);
            prop_assert!(z.im >= w.im_min - 1e-6 && z.im <= w.im_max + 1e-6);
        }
        for pair in pts.windows(2) {
            let (a, b) = (pair[0].0, pair[1].0);
            prop_assert!((a.im, a.re) <= (b.im, b.re));
        }
    }

    #[test]
    fn minkowski_sum_of_point_sets_is_the_pairwise_sums(
        left in prop::collection::vec((-3i8..=3, -3i8..=3), 1..5),
        right in prop::collection::vec((-3i8..=3, -3i8..=3), 1..5),
    ) {
        let build = |pts: &[(i8, i8)]| {
            let mut d = Divisor::default();
            for &(r, i) in pts {
                d.push_point(cx(r as f64 * 0.5, i as f64 * 0.5), 1);
            }
            d
        };
        let a = build(&left);
        let b = build(&right);
        let sum = a.minkowski_sum(&b).unwrap();
        let w = Window::new(-4.0, 4.0, -4.0, 4.0);
        let support = sum.support_in(&w);
        let mut expect: Vec<Complex64> = left
            .iter()
            .flat_map(|&(r1, i1)| {
                right.iter().map(move |&(r2, i2)| {
                    cx((r1 + r2) as f64 * 0.5, (i1 + i2) as f64 * 0.5)
                })
            })
            .collect();
        expect.sort_by(|x, y| (x.im, x.re).partial_cmp(&(y.im, y.re)).unwrap());
        expect.dedup_by(|x, y| (*x - *y).norm() < 1e-9);
        prop_assert_eq!(support.len(), expect.len());
        for (got, want) in support.iter().zip(&expect) {
            prop_assert!((got - want).norm() < 1e-9);
        }
    }
}

/// Ten seeded random sample points clear of every pole of the gasket and
/// carpet zetas.
fn reconstruction_samples(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut out = Vec::new();
    while out.len() < 10 {
        let s = cx(rng.gen_range(-0.5..3.0), rng.gen_range(-20.0..20.0));
        let clear_integers = (s - cx(0.0, 0.0)).norm() > 0.3 && (s - cx(1.0, 0.0)).norm() > 0.3;
        let d2 = 3.0f64.ln() / 2.0f64.ln();
        let d8 = 8.0f64.ln() / 3.0f64.ln();
        let p2 = 2.0 * std::f64::consts::PI / 2.0f64.ln();
        let p3 = 2.0 * std::f64::consts::PI / 3.0f64.ln();
        let clear_families = [(d2, p2), (d8, p3)].iter().all(|&(d, p)| {
            let k = (s.im / p).round();
            (s - cx(d, k * p)).norm() > 0.3
        });
        if clear_integers && clear_families {
            out.push(s);
        }
    }
    out
}

#[test]
fn stock_sprays_reproduce_their_catalog_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7e);
    let samples = reconstruction_samples(&mut rng);
    let cases = [
        ("sierpinski-gasket", SelfSimilarSpray::sierpinski_gasket()),
        ("sierpinski-carpet", SelfSimilarSpray::sierpinski_carpet()),
    ];
    for (name, spray) in cases {
        let entry = catalog_get(name, &CatalogParams::default()).unwrap();
        let stored = entry.relative_part.as_ref().unwrap();
        let rebuilt = spray.zeta();
        for &s in &samples {
            let a = stored.eval(s).unwrap();
            let b = rebuilt.eval(s).unwrap();
            assert!(
                (a - b).norm() <= 1e-12 * (1.0 + a.norm()),
                "{name} at {s}: catalog {a}, spray {b}"
            );
        }
        let worst = spray.functional_equation_residual(stored, &samples).unwrap();
        assert!(worst <= 1e-12, "{name}: functional equation defect {worst}");
    }
}
