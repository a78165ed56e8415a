//! Minkowski measurability verdicts and content computations.
//!
//! The pole at the dimension decides everything. A simple real pole with
//! no companions on its vertical line gives an honest Minkowski content.
//! Companions on the line force multiplicative oscillation, so upper and
//! lower contents separate and only their average survives as a residue.
//! A multiple pole degenerates the plain content to zero or infinity, but
//! measuring against `eps^(N-D) log^p (1/eps)` restores a finite limit.

use fzeta_expr::{laurent_coeffs, residue_simple, Expr};
use fzeta_moran::{classify, Classification, DirichletPolynomial, Window};
use fzeta_spray::{scaling_divisor, CatalogEntry, EntryKind};
use fzeta_strings::{FractalString, GeometricZetaForm, Provenance};
use num_complex::Complex64;

use crate::TubeError;

/// Poles closer to the real axis than this are treated as real.
const IM_TOL: f64 = 1e-9;

/// Presence of complex dimensions off the real axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Fractality {
    /// Every pole is real: no log-periodic oscillation at any order.
    NotFractal,
    /// Nonreal poles on the critical line `Re s = D` itself.
    Critical,
    /// Nonreal poles exist but only strictly below the dimension; the
    /// exponent is the largest real part carrying one.
    Subcritical { exponent: f64 },
}

/// What the pole at the dimension says about Minkowski content.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ContentVerdict {
    /// Simple real pole, alone on its line: the content exists.
    Measurable { content: f64 },
    /// Companions on the critical line: upper and lower contents differ
    /// and the residue only pins their multiplicative average.
    NotMeasurable { average: f64 },
    /// A pole of order `power + 1`: plain content degenerates, but
    /// against the gauge `eps^(N-D) log^power (1/eps)` the stated content
    /// is the limit.
    LogGauge { power: u32, content: f64 },
}

/// Joint measurability and fractality verdict for one set or string.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub dimension: f64,
    pub content: ContentVerdict,
    pub fractal: Fractality,
}

/// Upper and lower Minkowski contents of a lattice string.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContentBand {
    pub lower: f64,
    pub upper: f64,
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn stored_residue(entry: &CatalogEntry, at: Complex64) -> Option<Complex64> {
    entry.residues.iter().find(|(p, _)| (p - at).norm() <= 1e-8).map(|(_, v)| *v)
}

/// Clearance-limited contour radius around `at`, given the other poles.
fn safe_radius(at: Complex64, points: &[(Complex64, i32)]) -> f64 {
    let mut clearance: f64 = f64::INFINITY;
    for &(p, _) in points {
        let dist = (p - at).norm();
        if dist > IM_TOL {
            clearance = clearance.min(dist);
        }
    }
    (0.5 * clearance).min(0.4).max(1e-4)
}

fn fractality_from(
    dimension: f64,
    points: &[(Complex64, i32)],
    family_res: impl Iterator<Item = f64>,
) -> Fractality {
    let mut top: Option<f64> = None;
    for re in family_res.chain(
        points.iter().filter(|(p, _)| p.im.abs() > IM_TOL).map(|(p, _)| p.re),
    ) {
        top = Some(top.map_or(re, |t: f64| t.max(re)));
    }
    match top {
        None => Fractality::NotFractal,
        Some(e) if e >= dimension - IM_TOL => Fractality::Critical,
        Some(e) => Fractality::Subcritical { exponent: e },
    }
}

/// Verdict for a catalog entry, from its divisor, stored residues, and
/// closed form when higher Laurent data is required.
///
/// For entries whose divisor is only an upper bound the verdict assumes
/// the listed poles are genuinely there.
pub fn classify_entry(entry: &CatalogEntry) -> Result<Verdict, TubeError> {
    let n = entry.ambient as f64;
    let d = entry.dimension;
    let max_period =
        entry.divisor.families().iter().map(|f| f.period).fold(0.0, f64::max);
    let span = (1.2 * max_period).max(12.0);
    let window = Window::new(-0.5, n + 0.5, -span, span);
    let points = entry.divisor.points_in(&window);

    let order = points
        .iter()
        .find(|(p, _)| (p - cx(d, 0.0)).norm() <= IM_TOL)
        .map(|&(_, m)| m)
        .ok_or_else(|| {
            TubeError::Invalid(format!(
                "entry {:?} lists no pole at its dimension {d}",
                entry.name
            ))
        })?;
    let oscillatory = points
        .iter()
        .any(|(p, _)| p.re >= d - IM_TOL && p.im.abs() > IM_TOL);

    // Tube zetas yield the content as a bare residue; distance zetas carry
    // the extra kernel factor N - s.
    let kernel_div = match entry.kind {
        EntryKind::Tube { .. } => 1.0,
        _ => n - d,
    };

    let content = if order >= 2 {
        let zeta = entry.zeta.as_ref().ok_or(TubeError::NoClosedForm)?;
        let radius = safe_radius(cx(d, 0.0), &points);
        let top = laurent_coeffs(zeta, cx(d, 0.0), radius, -order, -order)?[0];
        let mut factorial = 1.0;
        for j in 1..order {
            factorial *= j as f64;
        }
        ContentVerdict::LogGauge {
            power: (order - 1) as u32,
            content: top.re / (factorial * kernel_div),
        }
    } else {
        let res = match stored_residue(entry, cx(d, 0.0)) {
            Some(v) => v.re,
            None => match &entry.zeta {
                Some(z) => residue_simple(z, cx(d, 0.0))?.re,
                None => {
                    return Err(TubeError::Invalid(format!(
                        "entry {:?} has neither a stored residue nor a closed \
                         form at its dimension",
                        entry.name
                    )))
                }
            },
        };
        let value = res / kernel_div;
        if oscillatory {
            ContentVerdict::NotMeasurable { average: value }
        } else {
            ContentVerdict::Measurable { content: value }
        }
    };

    let fractal =
        fractality_from(d, &points, entry.divisor.families().iter().map(|f| f.base.re));
    Ok(Verdict { dimension: d, content, fractal })
}

/// Verdict for a fractal string, in the string normalization: content
/// compares the inner tube volume against `eps^(1-D)`.
pub fn classify_string(string: &FractalString) -> Result<Verdict, TubeError> {
    let d = string.dimension().ok_or_else(|| {
        TubeError::Invalid("the string carries no closed-form dimension".into())
    })?;
    match string.provenance() {
        Provenance::PowerTail { a } => {
            // Lengths j^-a - (j+1)^-a behave like a j^-(a+1): monotone
            // decay with no multiplicative structure, every complex
            // dimension real, and an honest content.
            let content = 2f64.powf(1.0 - d) * a.powf(d) / (1.0 - d);
            Ok(Verdict {
                dimension: d,
                content: ContentVerdict::Measurable { content },
                fractal: Fractality::NotFractal,
            })
        }
        Provenance::Cantor
        | Provenance::GeneralizedCantor { .. }
        | Provenance::SelfSimilar { .. } => {
            let zeta = match string.geometric_zeta() {
                GeometricZetaForm::Closed(e) => e,
                GeometricZetaForm::PartialSumsOnly => return Err(TubeError::NoClosedForm),
            };
            let res = residue_simple(&zeta, cx(d, 0.0))?.re;
            let value = res * 2f64.powf(1.0 - d) / (d * (1.0 - d));
            let poly = DirichletPolynomial::new(string.ratio_bases().to_vec())?;
            match classify(&poly) {
                Classification::Lattice { .. } => Ok(Verdict {
                    dimension: d,
                    content: ContentVerdict::NotMeasurable { average: value },
                    fractal: Fractality::Critical,
                }),
                _ => {
                    let exponent = nonlattice_exponent(&poly, d)?;
                    Ok(Verdict {
                        dimension: d,
                        content: ContentVerdict::Measurable { content: value },
                        fractal: Fractality::Subcritical { exponent },
                    })
                }
            }
        }
        _ => Err(TubeError::NoClosedForm),
    }
}

/// Largest real part among the nonreal scaling zeros a widening search
/// finds. Nonlattice systems always have some; their real parts cluster
/// toward the dimension from below without reaching it.
fn nonlattice_exponent(poly: &DirichletPolynomial, d: f64) -> Result<f64, TubeError> {
    for span in [60.0, 240.0] {
        let window = Window::new(d - 2.0, d + 0.5, -span, span);
        let best = scaling_divisor(poly, &window)?
            .points_in(&window)
            .into_iter()
            .filter(|(p, _)| p.im.abs() > IM_TOL)
            .map(|(p, _)| p.re)
            .fold(f64::NEG_INFINITY, f64::max);
        if best.is_finite() {
            return Ok(best);
        }
    }
    Err(TubeError::Invalid(
        "no nonreal scaling zeros found in a tall search window".into(),
    ))
}

/// Upper and lower Minkowski contents of a lattice string, from exact tube
/// volumes sampled across one multiplicative period.
///
/// The normalized volume `V(eps) / eps^(1-D)` is periodic in `log(1/eps)`
/// up to a transient that dies like `eps^D`; sampling deep (around
/// `eps = 1e-8`) makes the transient negligible against the band width.
/// Corner points, where `2 eps` crosses a length, join the uniform grid so
/// the extrema cannot fall between samples.
pub fn lattice_contents(
    string: &FractalString,
    samples: usize,
) -> Result<ContentBand, TubeError> {
    let d = string.dimension().ok_or_else(|| {
        TubeError::Invalid("the string carries no closed-form dimension".into())
    })?;
    let bases = string.ratio_bases();
    if bases.is_empty() {
        return Err(TubeError::NotLattice);
    }
    let poly = DirichletPolynomial::new(bases.to_vec())?;
    let period = match classify(&poly) {
        Classification::Lattice { generator, .. } => (1.0 / generator).ln(),
        _ => return Err(TubeError::NotLattice),
    };

    let samples = samples.max(16);
    let u0 = (1e8f64).ln();
    let mut grid: Vec<f64> = (0..samples)
        .map(|i| u0 + period * i as f64 / samples as f64)
        .collect();
    let smallest = 2.0 * (-(u0 + period)).exp();
    let largest = 2.0 * (-u0).exp();
    for (len, _) in string.lengths() {
        if len < smallest {
            break;
        }
        if len <= largest {
            let u = (2.0 / len).ln();
            if u >= u0 && u < u0 + period {
                grid.push(u);
            }
        }
    }

    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for &u in &grid {
        let eps = (-u).exp();
        let v = string.tube_exact(eps)?;
        let g = v * ((1.0 - d) * u).exp();
        lower = lower.min(g);
        upper = upper.max(g);
    }
    Ok(ContentBand { lower, upper })
}
