//! Property checks for the raster measurement pipeline.

use fzeta_measure::{cantor_function, dimension_fit, edt_squared, DistanceField};
use proptest::prelude::*;

fn brute_force(set: &[bool], nx: usize, ny: usize) -> Vec<u32> {
    let features: Vec<(i64, i64)> = (0..nx * ny)
        .filter(|&i| set[i])
        .map(|i| ((i % nx) as i64, (i / nx) as i64))
        .collect();
    let mut out = vec![u32::MAX; nx * ny];
    for y in 0..ny as i64 {
        for x in 0..nx as i64 {
            let mut best = u64::MAX;
            for &(fx, fy) in &features {
                let d = ((x - fx) * (x - fx) + (y - fy) * (y - fy)) as u64;
                best = best.min(d);
            }
            if best < u64::MAX {
                out[(y as usize) * nx + x as usize] = best as u32;
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exact_transform_agrees_with_brute_force(
        nx in 3usize..40,
        ny in 3usize..28,
        bits in prop::collection::vec(0u8..100, 40 * 28),
        threshold in 1u8..40,
    ) {
        let set: Vec<bool> = bits[..nx * ny].iter().map(|&b| b < threshold).collect();
        prop_assert_eq!(edt_squared(&set, nx, ny), brute_force(&set, nx, ny));
    }

    #[test]
    fn staircase_heights_are_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(cantor_function(lo) <= cantor_function(hi) + 1e-15);
        let c = cantor_function(hi);
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn power_law_fits_recover_their_exponent(
        d in 0.1f64..1.9,
        amplitude in 0.5f64..8.0,
    ) {
        let points: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let eps = 10.0f64.powf(-0.1 * i as f64 - 1.0);
                (eps, amplitude * eps.powf(2.0 - d))
            })
            .collect();
        let fit = dimension_fit(&points, 2).unwrap();
        prop_assert!((fit.dimension - d).abs() < 1e-10);
        prop_assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn tube_volumes_grow_with_the_width(
        bits in prop::collection::vec(0u8..100, 24 * 24),
        lo in 0.2f64..0.5,
        gap in 0.05f64..0.4,
    ) {
        let set: Vec<bool> = bits.iter().map(|&b| b < 8).collect();
        prop_assume!(set.iter().any(|&b| b));
        let field = DistanceField::from_set(24, 24, 1.0 / 24.0, &set, None);
        let small = field.tube_volume(lo).unwrap();
        let large = field.tube_volume(lo + gap).unwrap();
        prop_assert!(large >= small);
        prop_assert!(small > 0.0);
        prop_assert!(large <= 1.0 + 1e-12);
    }
}
