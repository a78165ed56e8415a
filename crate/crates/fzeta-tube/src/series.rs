//! Synthesis of tube-volume expansions from pole data.
//!
//! A zeta function with poles `omega` of order `m` turns into a sum of
//! terms `eps^(N - omega) * P(log(1/eps))` with `P` a polynomial of degree
//! `m - 1`. The three supported normalizations differ only in the rational
//! kernel multiplying the zeta inside the residue:
//!
//! * distance zetas use `eps^(N-s) / (N-s)`,
//! * tube zetas use `eps^(N-s)` alone,
//! * length zetas of strings use `(2 eps)^(1-s) / (s (1-s))`, which adds a
//!   structural pole at `s = 0` on top of the zeta's own.
//!
//! Laurent data at each pole comes from contour integration of the closed
//! form, so the synthesis works uniformly for simple poles, multiple poles,
//! and poles sitting on top of kernel poles.

use fzeta_expr::{laurent_coeffs, Expr};
use fzeta_moran::DirichletPolynomial;
use fzeta_spray::{scaling_divisor, CatalogEntry, Divisor, EntryKind, Window};
use fzeta_strings::{FractalString, GeometricZetaForm};
use num_complex::Complex64;

use crate::TubeError;

/// Poles closer to the real axis than this are treated as real.
const IM_TOL: f64 = 1e-9;

/// Smallest allowed Laurent contour radius; poles packed tighter than twice
/// this cannot be separated reliably.
const MIN_RADIUS: f64 = 1e-4;

/// Largest Laurent contour radius, kept moderate so the circle stays well
/// inside the region where the closed form is tame.
const MAX_RADIUS: f64 = 0.4;

/// Which residue kernel relates the zeta function to the tube volume.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TubeNormalization {
    /// Distance zeta of a relative pair or bounded set in dimension `N`:
    /// kernel `eps^(N-s) / (N-s)`.
    Distance,
    /// Tube zeta: kernel `eps^(N-s)`.
    TubeZeta,
    /// Geometric zeta of a fractal string: kernel
    /// `(2 eps)^(1-s) / (s (1-s))`, ambient dimension one.
    StringLength,
}

/// One power of the expansion: `eps^(N - omega)` times a polynomial in
/// `log(1/(scale * eps))`.
#[derive(Clone, Debug)]
pub struct TubeTerm {
    /// The pole the term descends from. Only poles with nonnegative
    /// imaginary part are stored.
    pub omega: Complex64,
    /// True when the pole is strictly complex and stands in for a
    /// conjugate pair, so the evaluated term counts twice its real part.
    pub doubled: bool,
    /// Coefficient of `log^j (1/(scale * eps))` at index `j`.
    pub log_coeffs: Vec<Complex64>,
}

/// A truncated tube-volume expansion `V(eps) = sum of terms`.
#[derive(Clone, Debug)]
pub struct TubeSeries {
    ambient: u32,
    scale: f64,
    valid_to: f64,
    terms: Vec<TubeTerm>,
}

impl TubeSeries {
    /// Ambient dimension `N` of the expansion.
    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    /// The factor in front of `eps` inside powers and logarithms: two for
    /// string expansions, one otherwise.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Upper end of the radii where the expansion claims validity.
    pub fn valid_to(&self) -> f64 {
        self.valid_to
    }

    /// The terms, sorted by descending real part of the pole.
    pub fn terms(&self) -> &[TubeTerm] {
        &self.terms
    }

    /// The term descending from the given pole, matched within `1e-9`.
    pub fn term_at(&self, omega: Complex64) -> Option<&TubeTerm> {
        self.terms.iter().find(|t| (t.omega - omega).norm() <= 1e-9)
    }

    /// The tube volume the expansion predicts at radius `eps`.
    pub fn eval(&self, eps: f64) -> Result<f64, TubeError> {
        if !(eps > 0.0 && eps <= self.valid_to) {
            return Err(TubeError::OutsideValidity { eps, valid_to: self.valid_to });
        }
        let lx = (self.scale * eps).ln();
        let big_l = -lx;
        let n = Complex64::new(self.ambient as f64, 0.0);
        let mut acc = 0.0;
        for term in &self.terms {
            let power = ((n - term.omega) * lx).exp();
            let mut poly = Complex64::new(0.0, 0.0);
            for c in term.log_coeffs.iter().rev() {
                poly = poly * big_l + c;
            }
            let v = power * poly;
            acc += if term.doubled { 2.0 * v.re } else { v.re };
        }
        Ok(acc)
    }
}

/// Laurent coefficients of the kernel at `omega`, indexed from `-ord` with
/// `count` entries in total.
fn kernel_laurent(
    norm: TubeNormalization,
    ambient: u32,
    omega: Complex64,
    count: usize,
) -> Result<(i32, Vec<Complex64>), TubeError> {
    let n = Complex64::new(ambient as f64, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match norm {
        TubeNormalization::TubeZeta => {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); count];
            coeffs[0] = one;
            Ok((0, coeffs))
        }
        TubeNormalization::Distance => {
            if (n - omega).norm() <= IM_TOL {
                return Err(TubeError::Invalid(format!(
                    "pole at {omega} coincides with the ambient dimension {ambient}; \
                     the distance-zeta kernel cannot be expanded there"
                )));
            }
            // 1/(N - s) = sum_q u^q / (N - omega)^(q+1) around s = omega + u.
            let inv = one / (n - omega);
            let mut coeffs = Vec::with_capacity(count);
            let mut acc = inv;
            for _ in 0..count {
                coeffs.push(acc);
                acc *= inv;
            }
            Ok((0, coeffs))
        }
        TubeNormalization::StringLength => {
            if (omega - one).norm() <= IM_TOL {
                return Err(TubeError::Invalid(
                    "a string zeta pole at s = 1 would mean infinite total length".into(),
                ));
            }
            if omega.norm() <= IM_TOL {
                // 1/(s (1-s)) = u^-1 (1 + u + u^2 + ...) at s = u.
                Ok((1, vec![one; count]))
            } else {
                // Partial fractions 1/s + 1/(1-s), each expanded at omega.
                let mut coeffs = Vec::with_capacity(count);
                let inv_a = one / omega;
                let inv_b = one / (one - omega);
                let mut pa = inv_a;
                let mut pb = inv_b;
                for q in 0..count {
                    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                    coeffs.push(sign * pa + pb);
                    pa *= inv_a;
                    pb *= inv_b;
                }
                Ok((0, coeffs))
            }
        }
    }
}

/// Builds the expansion for `zeta` with the given kernel from an explicit
/// pole list. The list should cover a conjugate-symmetric region; members
/// below the real axis are dropped and their mirror images doubled.
pub fn series_from_parts(
    zeta: &Expr,
    ambient: u32,
    norm: TubeNormalization,
    poles: &[(Complex64, i32)],
    valid_to: f64,
) -> Result<TubeSeries, TubeError> {
    if !(valid_to > 0.0 && valid_to.is_finite()) {
        return Err(TubeError::Invalid(format!(
            "validity bound must be positive and finite, got {valid_to}"
        )));
    }
    if !zeta.has_real_coefficients() {
        return Err(TubeError::Invalid(
            "tube volumes are real; the zeta must have real coefficients".into(),
        ));
    }

    let mut upper: Vec<(Complex64, i32)> = Vec::new();
    for &(p, m) in poles {
        if m < 1 {
            return Err(TubeError::Invalid(format!("pole at {p} has nonpositive order {m}")));
        }
        if p.im >= -IM_TOL {
            upper.push((p, m));
        }
    }
    if norm == TubeNormalization::StringLength
        && !upper.iter().any(|(p, _)| p.norm() <= IM_TOL)
    {
        // The kernel pole at the origin contributes even when the zeta is
        // regular there; an order of zero marks a kernel-only point.
        upper.push((Complex64::new(0.0, 0.0), 0));
    }

    let mut terms = Vec::with_capacity(upper.len());
    for &(omega, m) in &upper {
        let (kernel_ord, kernel) = match norm {
            TubeNormalization::StringLength => {
                kernel_laurent(norm, ambient, omega, (m + 1) as usize + 1)?
            }
            _ => kernel_laurent(norm, ambient, omega, m as usize)?,
        };
        let m_total = m + kernel_ord;
        if m_total == 0 {
            continue;
        }

        // Zeta Laurent data d_k for k in [-m, kernel_ord - 1]. A regular
        // point needs only the value; true poles need a contour.
        let k_hi = kernel_ord - 1;
        let d: Vec<(i32, Complex64)> = if m == 0 {
            debug_assert!(k_hi >= 0);
            let mut v = vec![(0, zeta.eval(omega)?)];
            if k_hi >= 1 {
                for (idx, c) in
                    laurent_coeffs(zeta, omega, laurent_radius(omega, &upper)?, 1, k_hi)?
                        .into_iter()
                        .enumerate()
                {
                    v.push((1 + idx as i32, c));
                }
            }
            v
        } else {
            let radius = laurent_radius(omega, &upper)?;
            laurent_coeffs(zeta, omega, radius, -m, k_hi)?
                .into_iter()
                .enumerate()
                .map(|(idx, c)| (-m + idx as i32, c))
                .collect()
        };

        let mut log_coeffs = Vec::with_capacity(m_total as usize);
        let mut factorial = 1.0;
        for j in 0..m_total {
            if j > 0 {
                factorial *= j as f64;
            }
            let mut c = Complex64::new(0.0, 0.0);
            for &(k, dk) in &d {
                let q = -1 - j - k;
                if q < -kernel_ord {
                    continue;
                }
                let idx = (q + kernel_ord) as usize;
                if idx < kernel.len() {
                    c += dk * kernel[idx];
                }
            }
            log_coeffs.push(c / factorial);
        }
        while log_coeffs.len() > 1
            && log_coeffs.last().map_or(false, |c| c.norm() < 1e-300)
        {
            log_coeffs.pop();
        }
        if log_coeffs.iter().all(|c| c.norm() < 1e-300) {
            continue;
        }
        terms.push(TubeTerm { omega, doubled: omega.im > IM_TOL, log_coeffs });
    }

    terms.sort_by(|a, b| {
        b.omega
            .re
            .partial_cmp(&a.omega.re)
            .unwrap()
            .then(a.omega.im.partial_cmp(&b.omega.im).unwrap())
    });

    let scale = if norm == TubeNormalization::StringLength { 2.0 } else { 1.0 };
    Ok(TubeSeries { ambient, scale, valid_to, terms })
}

/// Half the clearance from `omega` to every other listed pole and to the
/// conjugate mirror poles, clamped to a sane contour range.
fn laurent_radius(
    omega: Complex64,
    poles: &[(Complex64, i32)],
) -> Result<f64, TubeError> {
    let mut clearance = f64::INFINITY;
    for &(p, _) in poles {
        let direct = (p - omega).norm();
        if direct > IM_TOL {
            clearance = clearance.min(direct);
        }
        let mirrored = (p.conj() - omega).norm();
        if mirrored > IM_TOL {
            clearance = clearance.min(mirrored);
        }
    }
    let radius = (0.5 * clearance).min(MAX_RADIUS);
    if radius < MIN_RADIUS {
        return Err(TubeError::PoleTooClose { location: omega, clearance });
    }
    Ok(radius)
}

/// The zero divisor of the scaling denominator of a self-similar string:
/// the pole set of its geometric zeta.
pub fn string_divisor(
    string: &FractalString,
    window: &Window,
) -> Result<Divisor, TubeError> {
    let bases = string.ratio_bases();
    if bases.is_empty() {
        return Err(TubeError::NoClosedForm);
    }
    let poly = DirichletPolynomial::new(bases.to_vec())?;
    Ok(scaling_divisor(&poly, window)?)
}

/// Tube expansion of a self-similar fractal string from its closed-form
/// geometric zeta, covering the poles inside the window.
///
/// The expansion represents the volume of the inner `eps`-neighborhood of
/// the boundary of the string's open set, valid for `eps` up to half the
/// longest length; the caller supplies `valid_to` accordingly.
pub fn series_for_string(
    string: &FractalString,
    window: &Window,
    valid_to: f64,
) -> Result<TubeSeries, TubeError> {
    let zeta = match string.geometric_zeta() {
        GeometricZetaForm::Closed(e) => e,
        GeometricZetaForm::PartialSumsOnly => return Err(TubeError::NoClosedForm),
    };
    let poles = string_divisor(string, window)?.points_in(window);
    series_from_parts(&zeta, 1, TubeNormalization::StringLength, &poles, valid_to)
}

/// Tube expansion of a catalog entry from its closed-form zeta and stored
/// divisor, covering the poles inside the window.
pub fn series_for_entry(
    entry: &CatalogEntry,
    window: &Window,
    valid_to: f64,
) -> Result<TubeSeries, TubeError> {
    let zeta = entry.zeta.as_ref().ok_or(TubeError::NoClosedForm)?;
    let norm = match entry.kind {
        EntryKind::Relative | EntryKind::Bounded { .. } => TubeNormalization::Distance,
        EntryKind::Tube { .. } => TubeNormalization::TubeZeta,
    };
    let poles = entry.divisor.points_in(window);
    series_from_parts(zeta, entry.ambient, norm, &poles, valid_to)
}

/// A window catching `k_max` conjugate pairs of every catalog progression:
/// real parts from just below zero to just above the ambient dimension,
/// imaginary parts `(k_max + 1/2)` times the period.
pub fn standard_window(ambient: u32, period: f64, k_max: u32) -> Window {
    let half = (k_max as f64 + 0.5) * period;
    Window::new(-0.5, ambient as f64 + 0.5, -half, half)
}
