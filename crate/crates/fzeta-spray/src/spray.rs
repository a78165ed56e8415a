//! Self-similar sprays: all scaled copies of a monophase generator under a
//! finite set of contraction ratios, applied in every combination.

use fzeta_expr::{Base, Expr};
use fzeta_moran::{classify, find_roots, Classification, DirichletPolynomial, Window};
use num_complex::Complex64;

use crate::{Divisor, MonophaseGenerator, PeriodicPoles, SprayError};

/// A fractal spray: one copy of the generator at scale `r` for every word
/// `r = r_{j_1} ... r_{j_k}` over the scaling ratios (weights multiply the
/// copy counts). Its relative distance zeta is the generator zeta divided
/// by `1 - sum_j c_j r_j^s`.
#[derive(Clone, Debug)]
pub struct SelfSimilarSpray {
    generator: MonophaseGenerator,
    scales: DirichletPolynomial,
}

impl SelfSimilarSpray {
    /// Requires `sum_j c_j r_j^N < 1` so the total volume of all copies is
    /// finite.
    pub fn new(
        generator: MonophaseGenerator,
        scales: DirichletPolynomial,
    ) -> Result<Self, SprayError> {
        let n = generator.ambient() as f64;
        let packed: f64 = scales
            .terms()
            .iter()
            .map(|(b, c)| c * (n * b.ln()).exp())
            .sum();
        if packed >= 1.0 {
            return Err(SprayError::Invalid(format!(
                "scaled copies have volume ratio {packed} >= 1; total volume diverges"
            )));
        }
        Ok(SelfSimilarSpray { generator, scales })
    }

    /// The standard gasket spray: an equilateral triangle of side 1/2
    /// repeated under three contractions of ratio 1/2.
    pub fn sierpinski_gasket() -> Self {
        let gen = MonophaseGenerator::equilateral_triangle(Base::rational(1, 2));
        let scales = DirichletPolynomial::new(vec![(Base::rational(1, 2), 3.0)]).unwrap();
        SelfSimilarSpray::new(gen, scales).unwrap()
    }

    /// The standard carpet spray: a square of side 1/3 repeated under
    /// eight contractions of ratio 1/3.
    pub fn sierpinski_carpet() -> Self {
        let gen = MonophaseGenerator::square(Base::rational(1, 3));
        let scales = DirichletPolynomial::new(vec![(Base::rational(1, 3), 8.0)]).unwrap();
        SelfSimilarSpray::new(gen, scales).unwrap()
    }

    pub fn generator(&self) -> &MonophaseGenerator {
        &self.generator
    }

    pub fn scales(&self) -> &DirichletPolynomial {
        &self.scales
    }

    /// Total volume of all copies.
    pub fn total_volume(&self) -> f64 {
        let n = self.generator.ambient() as f64;
        let packed: f64 = self
            .scales
            .terms()
            .iter()
            .map(|(b, c)| c * (n * b.ln()).exp())
            .sum();
        self.generator.volume() / (1.0 - packed)
    }

    /// The relative distance zeta of the spray as a closed form.
    pub fn zeta(&self) -> Expr {
        Expr::div(self.generator.zeta(), self.scales.to_expr())
    }

    /// Upper Minkowski dimension of the spray boundary: the larger of the
    /// generator boundary dimension `N - 1` and the similarity dimension
    /// of the scaling system.
    pub fn dimension(&self) -> f64 {
        let boundary = (self.generator.ambient() - 1) as f64;
        match self.scales.real_dimension() {
            Ok(sigma) => boundary.max(sigma),
            Err(_) => boundary,
        }
    }

    /// Largest relative defect of `zeta(s) = zeta_gen(s) + sum_j c_j r_j^s
    /// zeta(s)` over the samples, i.e. of `(1 - sum_j c_j r_j^s) zeta(s) =
    /// zeta_gen(s)`. Checking a candidate closed form from elsewhere
    /// against the spray's own geometry is the intended use.
    pub fn functional_equation_residual(
        &self,
        zeta: &Expr,
        samples: &[Complex64],
    ) -> Result<f64, SprayError> {
        let mut worst: f64 = 0.0;
        for &s in samples {
            let z = zeta.eval(s)?;
            let gen = self.generator.zeta_at(s);
            let defect = (self.scales.eval(s) * z - gen).norm() / (1.0 + z.norm());
            worst = worst.max(defect);
        }
        Ok(worst)
    }

    /// The pole divisor of the spray zeta inside the window: integer poles
    /// of the generator zeta plus zeros of the scaling denominator. Orders
    /// add when the two coincide (a lattice system whose similarity
    /// dimension is an integer). Cancellation against zeros of the
    /// generator numerator is not modelled; none of the stock generators
    /// has any.
    pub fn divisor_of(&self, window: &Window) -> Result<Divisor, SprayError> {
        let mut div = scaling_divisor(&self.scales, window)?;
        let n = self.generator.ambient();
        for (a, k) in self.generator.kappa().iter().enumerate() {
            if *k != 0.0 && (n as f64 - a as f64) != 0.0 {
                div.push_point(Complex64::new(a as f64, 0.0), 1);
            }
        }
        Ok(div)
    }
}

/// The zero divisor of `1 - sum_j c_j r_j^s` inside the window. Lattice
/// systems come back as vertical progressions from one fundamental strip;
/// anything else as the isolated roots the window contains.
pub fn scaling_divisor(
    scales: &DirichletPolynomial,
    window: &Window,
) -> Result<Divisor, SprayError> {
    let mut div = Divisor::default();
    match classify(scales) {
        Classification::Lattice { period, .. } => {
            // One fundamental strip of height `period`, placed at an
            // uneven offset so catalog roots (which sit at round
            // imaginary parts) stay clear of the strip boundary.
            let off = -0.512_345 * period;
            let strip = Window::new(window.re_min, window.re_max, off, off + period);
            let roots = find_roots(scales, &strip)?;
            // Comfortably wider than the boundary capture slack of the
            // root search, so a root grabbed just past the strip top is
            // recognized as the wrap of one near the bottom.
            let wrap_tol = 1e-3 * period;
            let mut kept: Vec<(Complex64, u32)> = Vec::new();
            for r in roots {
                let mut z = r.location;
                if z.im >= off + period - wrap_tol {
                    z.im -= period;
                }
                if kept.iter().all(|(w, _)| (w - z).norm() > wrap_tol) {
                    kept.push((z, r.order));
                }
            }
            for (z, ord) in kept {
                div.push_family(PeriodicPoles { base: z, period, order: ord as i32 });
            }
        }
        _ => {
            for r in find_roots(scales, window)? {
                div.push_point(r.location, r.order as i32);
            }
        }
    }
    Ok(div)
}
