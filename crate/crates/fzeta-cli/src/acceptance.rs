//! The verification suite: fourteen numbered criteria that exercise the
//! whole workspace against independently computed references.
//!
//! Each criterion freezes a tolerance and, where speed is part of the
//! claim, a wall-clock budget.  `fzeta report` prints one line per
//! criterion from exactly this code, and the integration tests call
//! [`run_criterion`] directly, so the command and the test suite cannot
//! drift apart.  Failures carry the measured number that broke the bound,
//! never just a boolean.

use std::f64::consts::{LN_2, PI, TAU};
use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fzeta_expr::quad::tanh_sinh;
use fzeta_expr::{
    laurent_coeffs, pole_order, residue_contour, residue_simple, winding_number, Base,
    ContourSpec,
};
use fzeta_measure::{aligned_window, string_content_summary};
use fzeta_moran::{find_roots, DirichletPolynomial, Window};
use fzeta_spectral::{frequency_count, second_term_coefficient, weyl_term};
use fzeta_spray::{
    catalog_entries, catalog_get, CatalogEntry, CatalogParams, EntryKind, SelfSimilarSpray,
};
use fzeta_strings::FractalString;
use fzeta_tube::{
    classify_entry, classify_string, lattice_contents, series_for_entry, series_for_string,
    standard_window, ContentVerdict, Fractality,
};

use crate::commands;
use crate::output::{log_grid, sig, Table};
use crate::spec::{Command, RunSpec, SpectralArgs, TubePredictArgs};

/// Criterion numbers with their short names, in running order.
pub const CRITERIA: [(u32, &str); 14] = [
    (1, "cantor-exact-tube-formula"),
    (2, "cantor-content-extremes"),
    (3, "lattice-root-ladder"),
    (4, "nonlattice-dimension"),
    (5, "stored-residues"),
    (6, "double-pole-laurent"),
    (7, "spray-reconstruction"),
    (8, "quadrature-identities"),
    (9, "gasket-raster-comparison"),
    (10, "divisor-arithmetic"),
    (11, "average-contents"),
    (12, "spectral-second-term"),
    (13, "classification-verdicts"),
    (14, "determinism-and-symmetry"),
];

/// Outcome of one criterion run.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    /// The decisive numbers: worst errors against their bounds, or the
    /// first bound that broke.
    pub details: String,
    /// Named CSV payloads produced along the way, for `--out-dir`.
    pub artifacts: Vec<(String, String)>,
}

impl CriterionReport {
    /// One aligned summary line, the `fzeta report` output format.
    pub fn line(&self) -> String {
        format!(
            "criterion {:2}  {:<28}  {}  {:6.2}s  {}",
            self.id,
            self.name,
            if self.passed { "pass" } else { "FAIL" },
            self.seconds,
            self.details
        )
    }
}

struct Finding {
    details: String,
    artifacts: Vec<(String, String)>,
}

impl Finding {
    fn new(details: String) -> Self {
        Finding { details, artifacts: Vec::new() }
    }

    fn with(details: String, artifacts: Vec<(String, String)>) -> Self {
        Finding { details, artifacts }
    }
}

type Check = Result<Finding, String>;

/// Wall-clock ceilings, for the criteria that claim speed.
fn budget(id: u32) -> Option<f64> {
    match id {
        1 | 2 => Some(1.0),
        3 => Some(5.0),
        9 => Some(60.0),
        12 => Some(30.0),
        _ => None,
    }
}

/// Runs one criterion and reports what happened.  Unknown numbers fail
/// rather than panic, so a caller can probe.
pub fn run_criterion(id: u32, seed: u64) -> CriterionReport {
    let name = CRITERIA
        .iter()
        .find(|(n, _)| *n == id)
        .map(|(_, name)| *name)
        .unwrap_or("unknown");
    let start = Instant::now();
    let outcome = match id {
        1 => cantor_exact_tube_formula(),
        2 => cantor_content_extremes(),
        3 => lattice_root_ladder(),
        4 => nonlattice_dimension(),
        5 => stored_residues(),
        6 => double_pole_laurent(),
        7 => spray_reconstruction(seed),
        8 => quadrature_identities(),
        9 => gasket_raster_comparison(),
        10 => divisor_arithmetic(),
        11 => average_contents(),
        12 => spectral_second_term(),
        13 => classification_verdicts(),
        14 => determinism_and_symmetry(),
        other => Err(format!("no criterion numbered {other}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (passed, details, artifacts) = match outcome {
        Ok(f) => match budget(id) {
            Some(limit) if seconds > limit => (
                false,
                format!("{} but took {seconds:.2}s, budget {limit}s", f.details),
                f.artifacts,
            ),
            _ => (true, f.details, f.artifacts),
        },
        Err(details) => (false, details, Vec::new()),
    };
    CriterionReport { id, name, passed, seconds, details, artifacts }
}

fn ln3() -> f64 {
    3.0f64.ln()
}

/// Dimension of the middle-third Cantor set, `log 2 / log 3`.
fn cantor_dim() -> f64 {
    LN_2 / ln3()
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn crel(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm().max(1.0)
}

fn lib<T, E: std::fmt::Display>(result: Result<T, E>) -> Result<T, String> {
    result.map_err(|e| e.to_string())
}

fn plain_params() -> CatalogParams {
    CatalogParams::default()
}

/// 1: the truncated expansion of the Cantor string, two hundred conjugate
/// pole pairs deep, against the exact volume `sum min(l_j, 2 eps)` over
/// two hundred log-spaced widths.
fn cantor_exact_tube_formula() -> Check {
    let string = FractalString::cantor();
    let period = TAU / ln3();
    let window = standard_window(1, period, 200);
    let series = lib(series_for_string(&string, &window, 1.0 / 6.0))?;

    let mut table = Table::new(&["epsilon", "volume_series", "volume_exact", "rel_err"]);
    let mut worst = 0.0f64;
    for eps in lib(log_grid(1e-5, 1.0 / 6.0, 200))? {
        let predicted = lib(series.eval(eps))?;
        let exact = lib(string.tube_exact(eps))?;
        let rel = (predicted - exact).abs() / exact;
        worst = worst.max(rel);
        table.row(&[sig(eps), sig(predicted), sig(exact), sig(rel)]);
    }
    if worst > 1e-4 {
        return Err(format!("worst rel err {worst:.3e} exceeds 1e-4"));
    }
    Ok(Finding::with(
        format!("200 widths in [1e-5, 1/6]: worst rel err {worst:.2e} (bound 1e-4)"),
        vec![("cantor_tube.csv".into(), table.finish())],
    ))
}

/// 2: upper and lower Minkowski contents of the Cantor string against the
/// closed forms `(1/D)(2D/(1-D))^(1-D)` and `2^(2-D)`.
fn cantor_content_extremes() -> Check {
    let d = cantor_dim();
    let lower_want = (1.0 / d) * (2.0 * d / (1.0 - d)).powf(1.0 - d);
    let upper_want = 2.0f64.powf(2.0 - d);
    let band = lib(lattice_contents(&FractalString::cantor(), 2048))?;
    let err_lower = (band.lower - lower_want).abs();
    let err_upper = (band.upper - upper_want).abs();
    if err_lower > 1e-3 {
        return Err(format!(
            "lower content {:.6} misses {lower_want:.6} by {err_lower:.2e}",
            band.lower
        ));
    }
    if err_upper > 1e-3 {
        return Err(format!(
            "upper content {:.6} misses {upper_want:.6} by {err_upper:.2e}",
            band.upper
        ));
    }
    Ok(Finding::new(format!(
        "lower {:.6} vs {lower_want:.6}, upper {:.6} vs {upper_want:.6} (bound 1e-3)",
        band.lower, band.upper
    )))
}

/// 3: every root of `1 - 2 (1/3)^s` with `|Im s| <= 40 pi / log 3` sits on
/// the ladder `log_3 2 + i k p`, each simple, forty-one in all, and the
/// argument principle over a circle around the strip counts the same
/// forty-one.
fn lattice_root_ladder() -> Check {
    let poly = lib(DirichletPolynomial::new(vec![(Base::rational(1, 3), 2.0)]))?;
    let d = cantor_dim();
    let period = TAU / ln3();
    let half_height = 40.0 * PI / ln3();
    let window = Window::new(0.0, 1.0, -half_height, half_height);
    let roots = lib(find_roots(&poly, &window))?;
    if roots.len() != 41 {
        return Err(format!("expected 41 roots, found {}", roots.len()));
    }
    let mut worst = 0.0f64;
    for root in &roots {
        if root.order != 1 {
            return Err(format!("root at {} has order {}", root.location, root.order));
        }
        let k = (root.location.im / period).round();
        let ladder = cx(d, k * period);
        let miss = (root.location - ladder).norm();
        worst = worst.max(miss);
        if miss > 1e-10 {
            return Err(format!(
                "root at {} misses ladder point {ladder} by {miss:.2e}",
                root.location
            ));
        }
    }
    let contour = ContourSpec::new(cx(d, 0.0), 20.5 * period);
    let winding = lib(winding_number(&poly.to_expr(), &contour))?;
    if (winding - 41.0).abs() > 1e-6 {
        return Err(format!("winding number {winding} is not 41"));
    }
    Ok(Finding::new(format!(
        "41 simple roots, worst ladder distance {worst:.2e} (bound 1e-10), winding 41"
    )))
}

/// 4: the real dimension of the `{1/2, 1/3}` Moran equation by bisection
/// and by Newton, against each other and a fixed reference value.
fn nonlattice_dimension() -> Check {
    let poly =
        lib(DirichletPolynomial::from_scales(vec![Base::rational(1, 2), Base::rational(1, 3)]))?;
    let bisect = lib(poly.real_dimension_bisect())?;
    let newton = lib(poly.real_dimension())?;
    let gap = (bisect - newton).abs();
    if gap > 1e-12 {
        return Err(format!("bisection {bisect} and Newton {newton} differ by {gap:.2e}"));
    }
    let reference = 0.7878849110258698;
    let miss = (newton - reference).abs();
    if miss > 1e-10 {
        return Err(format!("dimension {newton} misses {reference} by {miss:.2e}"));
    }
    Ok(Finding::new(format!(
        "bisection and Newton agree to {gap:.1e}, value {newton:.16} (ref {reference})"
    )))
}

/// The catalog at default parameters plus the parametric entries at a few
/// off-default arguments.
fn catalog_suite() -> Result<Vec<CatalogEntry>, String> {
    let mut entries = Vec::new();
    for name in catalog_entries() {
        entries.push(lib(catalog_get(name, &plain_params()))?);
    }
    for (name, n) in [("n-gasket", 3), ("sphere", 1), ("sphere", 3), ("sphere-in-ball", 4)] {
        entries.push(lib(catalog_get(name, &CatalogParams { n: Some(n), delta: None }))?);
    }
    Ok(entries)
}

/// 5: every residue stored in the catalog, reproduced from the closed
/// form by the symbolic residue extractor.
fn stored_residues() -> Check {
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    for entry in catalog_suite()? {
        let Some(zeta) = &entry.zeta else { continue };
        for &(pole, want) in &entry.residues {
            let got = lib(residue_simple(zeta, pole))
                .map_err(|e| format!("{} at {pole}: {e}", entry.name))?;
            let rel = crel(got, want);
            worst = worst.max(rel);
            if rel > 1e-10 {
                return Err(format!(
                    "{} at {pole}: stored {want}, extracted {got}, rel {rel:.2e}",
                    entry.name
                ));
            }
            checked += 1;
        }
    }
    if checked <= 50 {
        return Err(format!("only {checked} stored residues have closed forms to check"));
    }
    Ok(Finding::new(format!(
        "{checked} residues reproduced, worst rel {worst:.2e} (bound 1e-10)"
    )))
}

/// 6: the order-two Laurent data of the half square at `s = 1`:
/// `c_-2 = 1/(4 log 2)` and `c_-1 = (29 log 2 - 2)/(8 log 2)` by contour
/// quadrature.
fn double_pole_laurent() -> Check {
    let entry = lib(catalog_get("half-square", &plain_params()))?;
    let zeta = entry.zeta.as_ref().ok_or("half-square entry lost its closed form")?;
    let center = cx(1.0, 0.0);
    let order = lib(pole_order(zeta, &ContourSpec::new(center, 0.5)))?;
    if order != 2 {
        return Err(format!("pole order at s = 1 is {order}, not 2"));
    }
    let coeffs = lib(laurent_coeffs(zeta, center, 0.5, -2, 0))?;
    let want_m2 = 1.0 / (4.0 * LN_2);
    let want_m1 = (29.0 * LN_2 - 2.0) / (8.0 * LN_2);
    let err_m2 = (coeffs[0] - want_m2).norm();
    let err_m1 = (coeffs[1] - want_m1).norm();
    if err_m2 > 1e-9 {
        return Err(format!("c_-2 = {} misses {want_m2} by {err_m2:.2e}", coeffs[0]));
    }
    if err_m1 > 1e-9 {
        return Err(format!("c_-1 = {} misses {want_m1} by {err_m1:.2e}", coeffs[1]));
    }
    Ok(Finding::new(format!(
        "c_-2 err {err_m2:.2e}, c_-1 err {err_m1:.2e} (bound 1e-9)"
    )))
}

/// 7: the gasket and carpet sprays rebuilt from generator and scaling
/// ratios alone, against the catalog's stored core factors at seeded
/// random regular points, plus each spray's own functional equation.
fn spray_reconstruction(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let window = Window::new(-1.0, 3.0, -10.0, 10.0);
    let mut details = String::new();
    for (spray, name) in [
        (SelfSimilarSpray::sierpinski_gasket(), "sierpinski-gasket"),
        (SelfSimilarSpray::sierpinski_carpet(), "sierpinski-carpet"),
    ] {
        let entry = lib(catalog_get(name, &plain_params()))?;
        let core = entry.relative_part.as_ref().ok_or("entry stores no core factor")?;
        let rebuilt = spray.zeta();
        let poles = lib(spray.divisor_of(&window))?.points_in(&window);

        let mut samples = Vec::with_capacity(10);
        while samples.len() < 10 {
            let s = cx(rng.gen_range(-0.5..2.5), rng.gen_range(-9.0..9.0));
            if poles.iter().all(|(p, _)| (s - p).norm() >= 0.2) {
                samples.push(s);
            }
        }

        let mut worst = 0.0f64;
        for &s in &samples {
            let got = lib(rebuilt.eval(s))?;
            let want = lib(core.eval(s))?;
            worst = worst.max(crel(got, want));
        }
        if worst > 1e-12 {
            return Err(format!("{name} rebuilt zeta disagrees, worst rel {worst:.2e}"));
        }
        let residual = lib(spray.functional_equation_residual(&rebuilt, &samples))?;
        if residual > 1e-12 {
            return Err(format!("{name} functional equation residual {residual:.2e}"));
        }
        let _ = write!(details, "{name} rel {worst:.1e}, eqn {residual:.1e}; ");
    }
    details.push_str("(bounds 1e-12)");
    Ok(Finding::new(details))
}

/// 8: four independent quadrature identities. The interval and disk
/// distance zetas and the two-point tube zeta against their defining
/// integrals at spot values, and on a gasket raster the direct distance
/// sum against the volume-integral route.
fn quadrature_identities() -> Check {
    let quad_tol = 1e-13;
    let mut worst_exact = 0.0f64;

    for ell in [1.0, 0.6] {
        for s in [cx(1.7, 0.0), cx(1.3, 0.9), cx(2.5, -1.1)] {
            let want = cx(2.0, 0.0).powc(cx(1.0, 0.0) - s) * cx(ell, 0.0).powc(s) / s;
            let half = tanh_sinh(|x| cx(x, 0.0).powc(s - 1.0), 0.0, ell / 2.0, quad_tol);
            let rel = crel(2.0 * half, want);
            worst_exact = worst_exact.max(rel);
            if rel > 1e-10 {
                return Err(format!("interval identity at l={ell}, s={s}: rel {rel:.2e}"));
            }
        }
    }

    for s in [cx(2.6, 0.0), cx(1.5, 1.0)] {
        let want = cx(TAU, 0.0) / (s * (s - 1.0));
        let got = TAU
            * tanh_sinh(|r| cx(r, 0.0) * cx(1.0 - r, 0.0).powc(s - 2.0), 0.0, 1.0, quad_tol);
        let rel = crel(got, want);
        worst_exact = worst_exact.max(rel);
        if rel > 1e-10 {
            return Err(format!("disk identity at s={s}: rel {rel:.2e}"));
        }
    }

    let pair = lib(catalog_get("sphere", &CatalogParams { n: Some(1), delta: Some(1.0) }))?;
    let pair_zeta = pair.zeta.as_ref().ok_or("two-point entry lost its closed form")?;
    for s in [cx(1.9, 0.0), cx(1.2, 0.8)] {
        let want = lib(pair_zeta.eval(s))?;
        let got = tanh_sinh(|t| 4.0 * cx(t, 0.0).powc(s - 1.0), 0.0, 1.0, quad_tol);
        let rel = crel(got, want);
        worst_exact = worst_exact.max(rel);
        if rel > 1e-10 {
            return Err(format!("two-point tube identity at s={s}: rel {rel:.2e}"));
        }
    }

    let delta = 1.0 / (2.0 * 3.0f64.sqrt());
    let field = lib(fzeta_measure::sierpinski_gasket(6, 1024))?.distance_field();
    let mut worst_raster = 0.0f64;
    for s in [cx(2.0, 0.0), cx(1.8, 0.7)] {
        let direct = lib(field.distance_zeta(s, delta))?;
        let integral = lib(field.tube_zeta_integral(s, delta, 2048))?;
        let rel = (direct - integral).norm() / direct.norm();
        worst_raster = worst_raster.max(rel);
        if rel > 1e-2 {
            return Err(format!("raster zeta routes at s={s}: rel {rel:.2e}"));
        }
    }

    Ok(Finding::new(format!(
        "closed forms vs integrals worst rel {worst_exact:.2e} (bound 1e-10), \
         raster routes worst rel {worst_raster:.2e} (bound 1e-2)"
    )))
}

/// 9: the gasket tube expansion against a depth-10 raster at 4096 cells
/// per unit, at three widths spanning a factor of five.
fn gasket_raster_comparison() -> Check {
    let entry = lib(catalog_get("sierpinski-gasket", &plain_params()))?;
    let delta = match entry.kind {
        EntryKind::Bounded { delta } => delta,
        _ => return Err("gasket entry is no longer a bounded drum".into()),
    };
    let period = TAU / LN_2;
    let series = lib(series_for_entry(&entry, &standard_window(2, period, 64), delta))?;
    let field = lib(fzeta_measure::sierpinski_gasket(10, 4096))?.distance_field();

    let mut table = Table::new(&["epsilon", "volume_series", "volume_raster", "rel_err"]);
    let mut worst = 0.0f64;
    for eps in [0.02, 0.05, 0.1] {
        let predicted = lib(series.eval(eps))?;
        let measured = lib(field.tube_volume(eps))?;
        let rel = (predicted - measured).abs() / measured;
        worst = worst.max(rel);
        table.row(&[sig(eps), sig(predicted), sig(measured), sig(rel)]);
        if rel > 0.02 {
            return Err(format!("at eps={eps}: series {predicted}, raster {measured}, rel {rel:.2e}"));
        }
    }
    Ok(Finding::with(
        format!("three widths, worst rel err {worst:.2e} (bound 2e-2)"),
        vec![("gasket_compare.csv".into(), table.finish())],
    ))
}

/// 10: divisor arithmetic. The Cantor divisor plus the interval divisor
/// gives the grill's; the Cantor divisor plus itself gives the dust's;
/// equality as point multisets over five oscillation periods.
fn divisor_arithmetic() -> Check {
    let cantor = lib(catalog_get("cantor-string", &plain_params()))?;
    let interval = lib(catalog_get("unit-interval", &plain_params()))?;
    let grill = lib(catalog_get("cantor-grill", &plain_params()))?;
    let dust = lib(catalog_get("cantor-dust", &plain_params()))?;
    let period = TAU / ln3();
    let window = Window::new(-0.5, 2.5, -2.5 * period, 2.5 * period);

    let with_interval = lib(cantor.divisor.minkowski_sum(&interval.divisor))?;
    let n_grill = with_interval.support_in(&window).len();
    if !with_interval.same_support_in(&grill.divisor, &window, 1e-12) {
        return Err("cantor + interval does not match the grill divisor".into());
    }
    let with_itself = lib(cantor.divisor.minkowski_sum(&cantor.divisor))?;
    let n_dust = with_itself.support_in(&window).len();
    if !with_itself.same_support_in(&dust.divisor, &window, 1e-12) {
        return Err("cantor + cantor does not match the dust divisor".into());
    }
    if n_grill < 10 || n_dust < 10 {
        return Err(format!("window too small: {n_grill} grill points, {n_dust} dust points"));
    }
    Ok(Finding::new(format!(
        "grill support matched on {n_grill} points, dust on {n_dust} (tol 1e-12)"
    )))
}

/// 11: windowed averages of the normalized tube volume. The Cantor string
/// against its residue formula, and the harmonic string against its
/// honest content `2 sqrt 2`.
fn average_contents() -> Check {
    let d = cantor_dim();
    let cantor = FractalString::cantor();
    let cantor_want = 2.0f64.powf(1.0 - d) / (d * (1.0 - d)) / (2.0 * ln3());
    let window = lib(aligned_window(&cantor, 16.0, 9.0))?;
    let summary = lib(string_content_summary(&cantor, window, 4096))?;
    let cantor_err = (summary.mean - cantor_want).abs();
    if cantor_err > 1e-3 {
        return Err(format!(
            "cantor average {:.6} misses {cantor_want:.6} by {cantor_err:.2e}",
            summary.mean
        ));
    }

    let harmonic = lib(FractalString::a_string(1.0))?;
    let harmonic_want = 8.0f64.sqrt();
    let harmonic_summary = lib(string_content_summary(&harmonic, (10.0, 22.0), 2048))?;
    let harmonic_err = (harmonic_summary.mean - harmonic_want).abs();
    if harmonic_err > 1e-2 {
        return Err(format!(
            "harmonic string average {:.6} misses {harmonic_want:.6} by {harmonic_err:.2e}",
            harmonic_summary.mean
        ));
    }
    Ok(Finding::new(format!(
        "cantor mean err {cantor_err:.2e} (bound 1e-3), harmonic mean err {harmonic_err:.2e} \
         (bound 1e-2)"
    )))
}

/// 12: the second spectral term of the harmonic string. The gap between
/// the volume term and the exact frequency count, normalized by
/// `sqrt x`, against the predicted coefficient at three decades.
fn spectral_second_term() -> Check {
    let string = lib(FractalString::a_string(1.0))?;
    let want = lib(second_term_coefficient(0.5))? * 8.0f64.sqrt();
    let reference = 1.4603545088095868;
    if (want - reference).abs() > 1e-12 {
        return Err(format!("coefficient {want} drifted from {reference}"));
    }

    let mut table = Table::new(&["x", "weyl", "count", "normalized_gap"]);
    let mut worst = 0.0f64;
    for x in [1e6, 1e7, 1e8] {
        let weyl = weyl_term(&string, x);
        let count = lib(frequency_count(&string, x))?;
        let gap = (weyl - count) / x.sqrt();
        let rel = (gap - want).abs() / want;
        worst = worst.max(rel);
        table.row(&[sig(x), sig(weyl), sig(count), sig(gap)]);
        if rel > 0.05 {
            return Err(format!("at x={x:.0e}: normalized gap {gap:.6} vs {want:.6}, rel {rel:.2e}"));
        }
    }
    Ok(Finding::with(
        format!("three decades, worst rel {worst:.2e} against {want:.10} (bound 5e-2)"),
        vec![("spectral_gap.csv".into(), table.finish())],
    ))
}

/// 13: measurability and fractality verdicts across the zoo: gasket,
/// Cantor graph, half square, circle, harmonic string.
fn classification_verdicts() -> Check {
    let gasket = lib(classify_entry(&lib(catalog_get("sierpinski-gasket", &plain_params()))?))?;
    match gasket.content {
        ContentVerdict::NotMeasurable { average } if average > 0.0 => {}
        other => return Err(format!("gasket verdict {other:?}, expected not measurable")),
    }
    if gasket.fractal != Fractality::Critical {
        return Err(format!("gasket fractality {:?}, expected critical", gasket.fractal));
    }

    let graph = lib(classify_entry(&lib(catalog_get("cantor-graph", &plain_params()))?))?;
    match graph.content {
        ContentVerdict::Measurable { content } if (content - 2.0).abs() <= 1e-9 => {}
        other => return Err(format!("cantor graph verdict {other:?}, expected content 2")),
    }
    match graph.fractal {
        Fractality::Subcritical { exponent } if (exponent - cantor_dim()).abs() <= 1e-9 => {}
        other => return Err(format!("cantor graph fractality {other:?}, expected subcritical")),
    }

    let half = lib(classify_entry(&lib(catalog_get("half-square", &plain_params()))?))?;
    let half_want = 1.0 / (4.0 * LN_2);
    match half.content {
        ContentVerdict::LogGauge { power: 1, content }
            if (content - half_want).abs() <= 1e-9 => {}
        other => {
            return Err(format!(
                "half square verdict {other:?}, expected log gauge content {half_want:.6}"
            ))
        }
    }

    let circle = lib(classify_entry(&lib(catalog_get("sphere", &plain_params()))?))?;
    let circle_want = 4.0 * PI;
    match circle.content {
        ContentVerdict::Measurable { content }
            if (content - circle_want).abs() <= 1e-9 * circle_want => {}
        other => {
            return Err(format!("circle verdict {other:?}, expected content {circle_want:.6}"))
        }
    }
    if circle.fractal != Fractality::NotFractal {
        return Err(format!("circle fractality {:?}, expected none", circle.fractal));
    }

    let harmonic = lib(classify_string(&lib(FractalString::a_string(1.0))?))?;
    let harmonic_want = 8.0f64.sqrt();
    match harmonic.content {
        ContentVerdict::Measurable { content }
            if (content - harmonic_want).abs() <= 1e-9 => {}
        other => {
            return Err(format!(
                "harmonic string verdict {other:?}, expected content {harmonic_want:.6}"
            ))
        }
    }
    if harmonic.fractal != Fractality::NotFractal {
        return Err(format!("harmonic fractality {:?}, expected none", harmonic.fractal));
    }

    Ok(Finding::new(
        "gasket oscillates, graph content 2, half square log gauge, circle 4 pi, \
         harmonic 2 sqrt 2"
            .into(),
    ))
}

/// 14: cross-cutting invariants. Byte-identical command output across
/// worker counts, conjugate symmetry of zetas and divisors, volume
/// monotonicity under its ceiling, winding additivity over disjoint
/// contours, and agreement of the two residue extractors.
fn determinism_and_symmetry() -> Check {
    let mut parts: Vec<&str> = Vec::new();

    let predict = |workers| RunSpec {
        workers,
        command: Command::TubePredict(TubePredictArgs {
            target: "cantor-string".into(),
            n: None,
            delta: None,
            kmax: 64,
            eps_min: 1e-4,
            eps_max: 0.1,
            points: 48,
            valid_to: None,
            out: None,
        }),
    };
    let spectral = |workers| RunSpec {
        workers,
        command: Command::Spectral(SpectralArgs {
            target: "string:cantor".into(),
            x_min: 10.0,
            x_max: 1e5,
            points: 24,
            out: None,
        }),
    };
    for (make, what) in [
        (&predict as &dyn Fn(usize) -> RunSpec, "tube-predict"),
        (&spectral as &dyn Fn(usize) -> RunSpec, "spectral"),
    ] {
        let serial = lib(commands::run(&make(1)))?;
        let parallel = lib(commands::run(&make(4)))?;
        if serial.stdout != parallel.stdout {
            return Err(format!("{what} output differs between 1 and 4 workers"));
        }
    }
    parts.push("worker-count invariance");

    let entry = lib(catalog_get("cantor-string", &plain_params()))?;
    let zeta = entry.zeta.as_ref().ok_or("cantor entry lost its closed form")?;
    for s in [cx(0.8, 3.0), cx(1.4, -7.5), cx(-0.2, 11.0)] {
        let direct = lib(zeta.eval(s.conj()))?;
        let mirrored = lib(zeta.eval(s))?.conj();
        if (direct - mirrored).norm() > 1e-12 * mirrored.norm().max(1.0) {
            return Err(format!("zeta breaks conjugate symmetry at {s}"));
        }
    }
    let gasket = lib(catalog_get("sierpinski-gasket", &plain_params()))?;
    let period2 = TAU / LN_2;
    let sym_window = Window::new(-0.5, 2.5, -3.5 * period2, 3.5 * period2);
    let points = gasket.divisor.points_in(&sym_window);
    for &(p, m) in points.iter().filter(|(p, _)| p.im > 1e-9) {
        if !points.iter().any(|&(q, mq)| (q - p.conj()).norm() <= 1e-9 && mq == m) {
            return Err(format!("divisor point {p} has no conjugate partner"));
        }
    }
    parts.push("conjugate symmetry");

    let string = FractalString::cantor();
    let total = string.total_length();
    let mut previous = 0.0f64;
    for eps in lib(log_grid(1e-6, 1.0, 100))? {
        let v = lib(string.tube_exact(eps))?;
        if v + 1e-15 < previous {
            return Err(format!("exact volume decreases at eps={eps}"));
        }
        if v > total + 1e-12 {
            return Err(format!("exact volume {v} exceeds the total length {total}"));
        }
        previous = v;
    }
    parts.push("volume monotone under its ceiling");

    let poly = lib(DirichletPolynomial::new(vec![(Base::rational(1, 3), 2.0)]))?;
    let expr = poly.to_expr();
    let d = cantor_dim();
    let period = TAU / ln3();
    let whole = lib(winding_number(&expr, &ContourSpec::new(cx(d, 0.0), 2.9 * period)))?;
    let upper =
        lib(winding_number(&expr, &ContourSpec::new(cx(d, period), 1.4 * period)))?;
    let lower =
        lib(winding_number(&expr, &ContourSpec::new(cx(d, -1.5 * period), 1.0 * period)))?;
    if (whole - 5.0).abs() > 1e-6 || (upper - 3.0).abs() > 1e-6 || (lower - 2.0).abs() > 1e-6 {
        return Err(format!("winding counts {whole}, {upper}, {lower} off their marks"));
    }
    if (whole - upper - lower).abs() > 1e-6 {
        return Err("winding number fails to add over disjoint contours".into());
    }
    parts.push("winding additivity");

    let geometric = match string.geometric_zeta() {
        fzeta_strings::GeometricZetaForm::Closed(e) => e,
        _ => return Err("cantor string lost its closed form".into()),
    };
    let at_dim = cx(d, 0.0);
    let simple = lib(residue_simple(&geometric, at_dim))?;
    let contour = lib(residue_contour(&geometric, &ContourSpec::new(at_dim, 0.3)))?;
    if (simple - contour).norm() > 1e-10 {
        return Err(format!("residue extractors disagree: {simple} vs {contour}"));
    }
    parts.push("residue extractors agree");

    Ok(Finding::new(parts.join(", ")))
}
