//! Dimension fits and Minkowski content estimates from tube volumes.
//!
//! A tube-volume curve `V(eps)` carries its fractal data in the scaling
//! limit: the slope of `log V` against `log eps` gives the dimension,
//! and the normalized quantity `V(eps) / eps^(n - d)` gives the content.
//! For lattice sets that quantity never settles; it oscillates with a
//! fixed period in `log(1/eps)`, so the honest summary is a band (lower
//! and upper envelope) together with a period-aligned average.

use crate::MeasureError;
use fzeta_moran::{classify, Classification, DirichletPolynomial};
use fzeta_strings::FractalString;

/// A least-squares fit of `log V(eps)` against `log eps`.
#[derive(Debug, Clone, Copy)]
pub struct DimensionFit {
    /// Estimated Minkowski dimension, `ambient - slope`.
    pub dimension: f64,
    /// Fitted `log V` at `eps = 1`.
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual_rms: f64,
}

/// Fits a power law `V(eps) ~ C eps^(ambient - d)` to measured tube
/// volumes and reads off `d`.
///
/// At least ten points spanning one and a half decades of `eps` are
/// required; with less leverage the slope mostly reflects noise and the
/// cell-size bias of the raster.
pub fn dimension_fit(points: &[(f64, f64)], ambient: u32) -> Result<DimensionFit, MeasureError> {
    if points.len() < 10 {
        return Err(MeasureError::Invalid(format!(
            "{} fit points; need at least 10",
            points.len()
        )));
    }
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &(eps, v) in points {
        if !(eps > 0.0 && v > 0.0) || !eps.is_finite() || !v.is_finite() {
            return Err(MeasureError::Invalid(format!(
                "fit point ({eps}, {v}) outside the positive quadrant"
            )));
        }
        lo = lo.min(eps);
        hi = hi.max(eps);
    }
    if hi / lo < 10.0f64.powf(1.5) {
        return Err(MeasureError::Invalid(format!(
            "widths span a factor {:.3}; need at least 10^1.5",
            hi / lo
        )));
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(eps, v) in points {
        let x = eps.ln();
        let y = v.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mut rss = 0.0;
    for &(eps, v) in points {
        let r = v.ln() - (slope * eps.ln() + intercept);
        rss += r * r;
    }
    Ok(DimensionFit {
        dimension: f64::from(ambient) - slope,
        intercept,
        residual_rms: (rss / n).sqrt(),
    })
}

/// The scaling behavior of `V(eps) / eps^(n - d)` over a log window:
/// envelope extremes and the window average.
#[derive(Debug, Clone, Copy)]
pub struct ContentSummary {
    /// Smallest observed normalized volume.
    pub lower: f64,
    /// Largest observed normalized volume.
    pub upper: f64,
    /// Average over the window; for a lattice set sampled over whole
    /// periods this converges to the average Minkowski content.
    pub mean: f64,
}

/// Samples `g(u) = V(e^(-u)) e^((ambient - dimension) u)` at `samples`
/// evenly spaced points of `[window.0, window.1]` and summarizes it.
///
/// The mean is a trapezoid average, so endpoint samples carry half
/// weight and the value is the true window integral divided by the
/// span.  The extremes refine the grid optimum by a three-point
/// parabola when the neighbors allow it.
pub fn content_summary<F>(
    mut tube: F,
    ambient: u32,
    dimension: f64,
    window: (f64, f64),
    samples: usize,
) -> Result<ContentSummary, MeasureError>
where
    F: FnMut(f64) -> Result<f64, MeasureError>,
{
    let (a, b) = window;
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(MeasureError::Invalid(format!("window [{a}, {b}] is empty")));
    }
    if samples < 8 {
        return Err(MeasureError::Invalid(format!("{samples} samples; need >= 8")));
    }
    if !(dimension.is_finite() && dimension < f64::from(ambient)) {
        return Err(MeasureError::Invalid(format!(
            "dimension {dimension} not below the ambient {ambient}"
        )));
    }
    let codim = f64::from(ambient) - dimension;
    let h = (b - a) / (samples - 1) as f64;
    let mut g = Vec::with_capacity(samples);
    for i in 0..samples {
        let u = a + h * i as f64;
        let eps = (-u).exp();
        let v = tube(eps)?;
        if !v.is_finite() || v < 0.0 {
            return Err(MeasureError::Invalid(format!(
                "tube volume {v} at eps = {eps} is not usable"
            )));
        }
        g.push(v * (codim * u).exp());
    }
    let mut sum = 0.0;
    for (i, &y) in g.iter().enumerate() {
        let w = if i == 0 || i == samples - 1 { 0.5 } else { 1.0 };
        sum += w * y;
    }
    let mean = sum / (samples - 1) as f64;
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    let mut arg_lo = 0;
    let mut arg_hi = 0;
    for (i, &y) in g.iter().enumerate() {
        if y < lower {
            lower = y;
            arg_lo = i;
        }
        if y > upper {
            upper = y;
            arg_hi = i;
        }
    }
    lower = refine_extremum(&g, arg_lo, false);
    upper = refine_extremum(&g, arg_hi, true);
    Ok(ContentSummary { lower, upper, mean })
}

/// Parabolic sharpening of a grid extremum.  Falls back to the raw
/// sample when the point sits on the boundary, the curvature points the
/// wrong way, or the fitted vertex leaves the bracketing cell.
fn refine_extremum(g: &[f64], i: usize, maximum: bool) -> f64 {
    let y = g[i];
    if i == 0 || i + 1 == g.len() {
        return y;
    }
    let (l, r) = (g[i - 1], g[i + 1]);
    let curve = l - 2.0 * y + r;
    if (maximum && curve >= 0.0) || (!maximum && curve <= 0.0) {
        return y;
    }
    let offset = 0.5 * (l - r) / curve;
    if offset.abs() > 1.0 {
        return y;
    }
    y - 0.25 * (l - r) * offset
}

/// Window average of the normalized tube volume; see
/// [`content_summary`] for the sampling rules.
pub fn average_content<F>(
    tube: F,
    ambient: u32,
    dimension: f64,
    window: (f64, f64),
    samples: usize,
) -> Result<f64, MeasureError>
where
    F: FnMut(f64) -> Result<f64, MeasureError>,
{
    Ok(content_summary(tube, ambient, dimension, window, samples)?.mean)
}

/// Content summary for a fractal string, using its exact tube volume
/// `V(eps) = sum_j min(l_j, 2 eps)` and its own similarity dimension.
pub fn string_content_summary(
    string: &FractalString,
    window: (f64, f64),
    samples: usize,
) -> Result<ContentSummary, MeasureError> {
    let dimension = string.dimension().ok_or_else(|| {
        MeasureError::Invalid("string exposes no similarity dimension to normalize by".into())
    })?;
    content_summary(
        |eps| string.tube_exact(eps).map_err(MeasureError::from),
        1,
        dimension,
        window,
        samples,
    )
}

/// Chooses a window `[start, start + span]` with `span >= min_span`,
/// stretched so that a lattice string fits a whole number of its
/// log-scale periods `log(1/r)`.
///
/// Lattice tube volumes oscillate with that period in `log(1/eps)`, so
/// an average over a misaligned window drags a spurious partial-cycle
/// term along with it.  Strings without scaling data keep the requested
/// span unchanged.
pub fn aligned_window(
    string: &FractalString,
    start: f64,
    min_span: f64,
) -> Result<(f64, f64), MeasureError> {
    if !(min_span > 0.0) || !start.is_finite() || !min_span.is_finite() {
        return Err(MeasureError::Invalid(format!(
            "window request start {start}, span {min_span} is not usable"
        )));
    }
    let bases = string.ratio_bases();
    if bases.is_empty() {
        return Ok((start, start + min_span));
    }
    let poly = DirichletPolynomial::new(bases.to_vec())?;
    match classify(&poly) {
        Classification::Lattice { generator, .. } => {
            let p = (1.0 / generator).ln();
            let cycles = (min_span / p).ceil().max(1.0);
            Ok((start, start + cycles * p))
        }
        _ => Ok((start, start + min_span)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fzeta_strings::FractalString;

    const CANTOR_DIM: f64 = 0.6309297535714574;

    #[test]
    fn pure_power_laws_are_recovered_exactly() {
        let points: Vec<(f64, f64)> = (0..24)
            .map(|i| {
                let eps = 10.0f64.powf(-0.1 * i as f64 - 0.5);
                (eps, 3.7 * eps.powf(2.0 - 1.585))
            })
            .collect();
        let fit = dimension_fit(&points, 2).unwrap();
        assert!((fit.dimension - 1.585).abs() < 1e-12);
        assert!((fit.intercept - 3.7f64.ln()).abs() < 1e-12);
        assert!(fit.residual_rms < 1e-13);
    }

    #[test]
    fn fits_without_leverage_are_refused() {
        let narrow: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                let eps = 0.1 - 0.001 * i as f64;
                (eps, eps.sqrt())
            })
            .collect();
        assert!(dimension_fit(&narrow, 1).is_err());
        assert!(dimension_fit(&narrow[..5], 1).is_err());
    }

    #[test]
    fn cantor_average_content_matches_the_residue_formula() {
        // Averaging the normalized tube volume over whole log-3 periods
        // leaves only the non-oscillating part: with d the Cantor
        // dimension this is 2^(1-d) / (2 d (1-d) ln 3).
        let string = FractalString::cantor();
        let window = aligned_window(&string, 16.0, 9.0).unwrap();
        let summary = string_content_summary(&string, window, 4096).unwrap();
        let d = CANTOR_DIM;
        let want = 2.0f64.powf(1.0 - d) / (2.0 * d * (1.0 - d) * 3.0f64.ln());
        assert!(
            (summary.mean / want - 1.0).abs() < 1e-3,
            "average {} vs {want}",
            summary.mean
        );
    }

    #[test]
    fn cantor_envelope_brackets_the_classical_contents() {
        let string = FractalString::cantor();
        let period = 3.0f64.ln();
        let summary =
            string_content_summary(&string, (16.0, 16.0 + period), 4096).unwrap();
        let d = CANTOR_DIM;
        let lower = (1.0 / d) * (2.0 * d / (1.0 - d)).powf(1.0 - d);
        let upper = 2.0f64.powf(2.0 - d);
        assert!((summary.lower / lower - 1.0).abs() < 2e-3, "lower {}", summary.lower);
        assert!((summary.upper / upper - 1.0).abs() < 2e-3, "upper {}", summary.upper);
    }

    #[test]
    fn the_harmonic_string_has_a_flat_content_curve() {
        // The a-string with a = 1 (lengths 1/(j(j+1))) is Minkowski
        // measurable with content 2 sqrt 2, so its envelope is tight
        // while the Cantor band stays visibly open.
        let string = FractalString::a_string(1.0).unwrap();
        let summary = string_content_summary(&string, (10.0, 22.0), 2048).unwrap();
        let want = 2.0 * 2.0f64.sqrt();
        assert!((summary.mean - want).abs() < 1e-2, "mean {}", summary.mean);
        assert!(summary.upper - summary.lower < 0.02, "band {:?}", summary);

        let cantor = string_content_summary(
            &FractalString::cantor(),
            (16.0, 16.0 + 3.0f64.ln()),
            2048,
        )
        .unwrap();
        assert!(cantor.upper - cantor.lower > 0.05);
    }

    #[test]
    fn windows_stretch_to_whole_lattice_periods() {
        let cantor = FractalString::cantor();
        let (a, b) = aligned_window(&cantor, 16.0, 9.0).unwrap();
        let p = 3.0f64.ln();
        assert!((a - 16.0).abs() < 1e-15);
        let cycles = (b - a) / p;
        assert!((cycles - cycles.round()).abs() < 1e-12);
        assert!(b - a >= 9.0);

        let plain = FractalString::a_string(1.0).unwrap();
        assert_eq!(aligned_window(&plain, 2.0, 5.0).unwrap(), (2.0, 7.0));
    }
}
