//! Frequency counting and its Weyl-type asymptotics.

use crate::{riemann_zeta, SpectralError};
use fzeta_expr::residue_simple;
use fzeta_moran::{classify, Classification, DirichletPolynomial};
use fzeta_strings::{FractalString, GeometricZetaForm, StringError, MAX_ITEMS, MIN_LENGTH};
use num_complex::Complex64;

/// The leading Weyl asymptotics of the frequency count: total length
/// times `x`.
pub fn weyl_term(string: &FractalString, x: f64) -> f64 {
    string.total_length() * x
}

/// The frequency counting function `N(x) = sum_j floor(x l_j)`.
///
/// Each interval of length `l` contributes the frequencies `n / l`, so it
/// holds `floor(x l)` of them up to `x`.  The sum runs over the finitely
/// many lengths with `x l >= 1` and is exact while counts stay below
/// `2^53`.  Arguments must stay below the reciprocal of the enumeration
/// floor, or lengths that still hold frequencies could be silently lost.
pub fn frequency_count(string: &FractalString, x: f64) -> Result<f64, SpectralError> {
    validate_count_point(x)?;
    let mut acc = 0.0f64;
    for (items, (l, m)) in string.lengths().enumerate() {
        let scaled = x * l;
        if scaled < 1.0 {
            break;
        }
        acc += scaled.floor() * m;
        if items + 1 >= MAX_ITEMS {
            return Err(StringError::ResourceLimit {
                items: MAX_ITEMS,
                scale: 1.0 / x,
            }
            .into());
        }
    }
    Ok(acc)
}

/// The same count through the harmonic fold `sum_n N_geom(x / n)`.
///
/// `N_geom` counts reciprocal lengths, so summing it over the integer
/// harmonics counts exactly the pairs `(j, n)` with `n <= x l_j`.  This is
/// an independent route to [`frequency_count`], useful as a cross-check;
/// it costs one geometric count per harmonic, about `x l_1` of them, so it
/// is meant for moderate `x`.
pub fn frequency_count_folded(string: &FractalString, x: f64) -> Result<f64, SpectralError> {
    validate_count_point(x)?;
    let mut acc = 0.0f64;
    let mut n = 1.0f64;
    loop {
        let count = string.counting(x / n)?;
        if count == 0.0 {
            return Ok(acc);
        }
        acc += count;
        n += 1.0;
    }
}

fn validate_count_point(x: f64) -> Result<(), SpectralError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpectralError::Invalid(format!("count point {x} not positive")));
    }
    if x > 1.0 / MIN_LENGTH {
        return Err(SpectralError::Invalid(format!(
            "count point {x} beyond the enumeration floor {MIN_LENGTH}"
        )));
    }
    Ok(())
}

/// The universal constant in the second term of the frequency count.
///
/// For a Minkowski measurable string of dimension `d` in `(0, 1)` with
/// content `M`, the count satisfies
/// `N(x) = W(x) - c M x^d + o(x^d)` with `c = (1 - d) 2^(d-1) (-zeta(d))`.
/// The constant is positive because zeta is negative on `(0, 1)`: the
/// fractal boundary always swallows frequencies relative to the Weyl term.
pub fn second_term_coefficient(d: f64) -> Result<f64, SpectralError> {
    if !(d > 0.0 && d < 1.0) {
        return Err(SpectralError::Invalid(format!(
            "second-term constant needs a dimension in (0, 1), got {d}"
        )));
    }
    let z = riemann_zeta(Complex64::new(d, 0.0))?;
    Ok((1.0 - d) * 2f64.powf(d - 1.0) * (-z.re))
}

/// The dimension-line oscillation of a lattice string's frequency count.
///
/// Holds one precomputed weight `res(zeta_L, s_k) zeta(s_k)` per complex
/// dimension `s_k = D + i k p` on the line through the dimension, so that
/// evaluating the oscillatory sum at many points costs only exponentials.
#[derive(Debug, Clone)]
pub struct SpectralOscillation {
    terms: Vec<(Complex64, Complex64)>,
}

impl SpectralOscillation {
    /// The stored `(s_k, res(zeta_L, s_k) * zeta(s_k))` pairs for `k >= 0`.
    pub fn terms(&self) -> &[(Complex64, Complex64)] {
        &self.terms
    }

    /// The oscillatory sum `sum_k w_k x^(s_k) / s_k`, conjugate poles
    /// folded in by doubling the real part of each `k > 0` term.
    pub fn eval(&self, x: f64) -> Result<f64, SpectralError> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(SpectralError::Invalid(format!(
                "oscillation point {x} not positive"
            )));
        }
        let lx = x.ln();
        let mut acc = 0.0f64;
        for (k, (s, w)) in self.terms.iter().enumerate() {
            let v = w * (s * lx).exp() / s;
            acc += if k == 0 { v.re } else { 2.0 * v.re };
        }
        Ok(acc)
    }
}

/// Assemble the oscillation carried by the `k_max + 1` lowest complex
/// dimensions on the lattice string's dimension line.
///
/// The frequency count of a lattice string deviates from its Weyl term by
/// `sum_k res(zeta_L, s_k) zeta(s_k) x^(s_k) / s_k` plus a bounded rest,
/// the sum running over the poles `s_k = D + 2 pi i k / ln(1/r)` of the
/// geometric zeta function.  Strings whose complex dimensions occupy
/// several vertical lines get only the line through the dimension; the
/// lower lines contribute a strictly smaller power of `x`.
pub fn spectral_oscillation(
    string: &FractalString,
    k_max: u32,
) -> Result<SpectralOscillation, SpectralError> {
    let bases = string.ratio_bases();
    if bases.is_empty() {
        return Err(SpectralError::NotLattice);
    }
    let poly = DirichletPolynomial::new(bases.to_vec())?;
    let period = match classify(&poly) {
        Classification::Lattice { period, .. } => period,
        _ => return Err(SpectralError::NotLattice),
    };
    let d = string
        .dimension()
        .ok_or_else(|| SpectralError::Invalid("string carries no dimension".into()))?;
    let zeta_l = match string.geometric_zeta() {
        GeometricZetaForm::Closed(e) => e,
        _ => return Err(SpectralError::NoClosedForm),
    };
    let mut terms = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let s = Complex64::new(d, f64::from(k) * period);
        let res = residue_simple(&zeta_l, s)?;
        let z = riemann_zeta(s)?;
        terms.push((s, res * z));
    }
    Ok(SpectralOscillation { terms })
}
