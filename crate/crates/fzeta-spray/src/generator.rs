//! Monophase generators: open sets whose inner tube volume is one
//! polynomial in the depth, valid all the way to the inradius.

use fzeta_expr::{Base, Expr};
use num_complex::Complex64;

use crate::SprayError;

/// An open set `G` in `R^N` with inner tube volume
/// `V(eps) = sum_a kappa[a] eps^(N-a)` for `0 <= eps <= g`, where `g` is
/// the inradius, and `V(eps) = |G|` beyond. `kappa[N-1]` carries the
/// surface term, `kappa[0]` the top-degree correction.
///
/// Any convex body whose inball touches every face qualifies: erosion by
/// `eps` is then the homothety of ratio `1 - eps/g`, so the eroded volume
/// is a polynomial in `eps` with no breakpoints before the body vanishes.
#[derive(Clone, Debug)]
pub struct MonophaseGenerator {
    ambient: u32,
    inradius: Base,
    kappa: Vec<f64>,
}

fn halve(b: &Base) -> Base {
    match *b {
        Base::Rational(n, d) if n % 2 == 0 => Base::rational(n / 2, d),
        Base::Rational(n, d) => Base::rational(n, 2 * d),
        Base::Real(x) => Base::real(0.5 * x),
    }
}

impl MonophaseGenerator {
    pub fn new(ambient: u32, inradius: Base, kappa: Vec<f64>) -> Result<Self, SprayError> {
        if ambient == 0 {
            return Err(SprayError::Invalid("ambient dimension must be positive".into()));
        }
        if kappa.len() != ambient as usize {
            return Err(SprayError::Invalid(format!(
                "expected {ambient} tube coefficients, got {}",
                kappa.len()
            )));
        }
        if kappa.iter().any(|k| !k.is_finite()) {
            return Err(SprayError::Invalid("tube coefficients must be finite".into()));
        }
        let gen = MonophaseGenerator { ambient, inradius, kappa };
        if !(gen.volume() > 0.0) {
            return Err(SprayError::Invalid(format!(
                "tube polynomial gives nonpositive volume {}",
                gen.volume()
            )));
        }
        Ok(gen)
    }

    /// Open interval of the given length.
    pub fn interval(length: Base) -> Self {
        MonophaseGenerator { ambient: 1, inradius: halve(&length), kappa: vec![2.0] }
    }

    /// Open square with the given side.
    pub fn square(side: Base) -> Self {
        let s = side.value();
        MonophaseGenerator { ambient: 2, inradius: halve(&side), kappa: vec![-4.0, 4.0 * s] }
    }

    /// Open equilateral triangle with the given side.
    pub fn equilateral_triangle(side: Base) -> Self {
        let s = side.value();
        let g = s / (2.0 * 3.0f64.sqrt());
        MonophaseGenerator {
            ambient: 2,
            inradius: Base::real(g),
            kappa: vec![-3.0 * 3.0f64.sqrt(), 3.0 * s],
        }
    }

    /// Open disk with the given radius.
    pub fn disk(radius: Base) -> Self {
        let r = radius.value();
        MonophaseGenerator {
            ambient: 2,
            inradius: radius,
            kappa: vec![-std::f64::consts::PI, 2.0 * std::f64::consts::PI * r],
        }
    }

    /// Open cube with the given side.
    pub fn cube(side: Base) -> Self {
        let s = side.value();
        MonophaseGenerator {
            ambient: 3,
            inradius: halve(&side),
            kappa: vec![8.0, -12.0 * s, 6.0 * s * s],
        }
    }

    /// Regular octahedron with the given side.
    pub fn octahedron(side: Base) -> Self {
        let s = side.value();
        let vol = 2.0f64.sqrt() / 3.0 * s.powi(3);
        let g = s / 6.0f64.sqrt();
        MonophaseGenerator {
            ambient: 3,
            inradius: Base::real(g),
            kappa: vec![vol / g.powi(3), -3.0 * vol / (g * g), 3.0 * vol / g],
        }
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn inradius(&self) -> &Base {
        &self.inradius
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    /// Total volume `|G| = V(g)`.
    pub fn volume(&self) -> f64 {
        let g = self.inradius.value();
        let n = self.ambient as i32;
        self.kappa.iter().enumerate().map(|(a, k)| k * g.powi(n - a as i32)).sum()
    }

    /// The tube coefficients extended by a constant slot holding `-|G|`,
    /// so the extended polynomial vanishes at the inradius. Spray tube
    /// expansions attach this slot's contribution at exponent zero.
    pub fn kappa_full(&self) -> Vec<f64> {
        let mut k = self.kappa.clone();
        k.push(-self.volume());
        k
    }

    /// Inner tube volume at depth `eps`, saturating at `|G|` past the
    /// inradius.
    pub fn tube_volume(&self, eps: f64) -> f64 {
        assert!(eps >= 0.0, "tube depth must be nonnegative");
        let g = self.inradius.value();
        let t = eps.min(g);
        let n = self.ambient as i32;
        self.kappa.iter().enumerate().map(|(a, k)| k * t.powi(n - a as i32)).sum()
    }

    /// The distance zeta of `G` relative to its boundary,
    /// `sum_a (N-a) kappa[a] g^(s-a) / (s-a)`, as a closed form with simple
    /// poles at the integers `0..N-1` where the coefficient is nonzero.
    pub fn zeta(&self) -> Expr {
        let n = self.ambient;
        let g = self.inradius.value();
        let mut terms = Vec::new();
        for (a, k) in self.kappa.iter().enumerate() {
            if *k == 0.0 {
                continue;
            }
            let coeff = (n as f64 - a as f64) * k * g.powi(-(a as i32));
            terms.push(Expr::div(
                Expr::mul(vec![Expr::real(coeff), Expr::exp_base(self.inradius.clone())]),
                Expr::s_minus(a as f64),
            ));
        }
        Expr::add(terms)
    }

    /// The generator scaled by `lambda`: inradius `lambda g` and
    /// coefficients `lambda^a kappa[a]`, so the zeta picks up a factor
    /// `lambda^s`.
    pub fn scaled(&self, lambda: f64) -> Self {
        assert!(lambda.is_finite() && lambda > 0.0, "scale factor must be positive");
        let kappa = self
            .kappa
            .iter()
            .enumerate()
            .map(|(a, k)| k * lambda.powi(a as i32))
            .collect();
        MonophaseGenerator {
            ambient: self.ambient,
            inradius: Base::real(lambda * self.inradius.value()),
            kappa,
        }
    }

    /// Evaluate the generator zeta directly, without building the
    /// expression tree.
    pub fn zeta_at(&self, s: Complex64) -> Complex64 {
        let n = self.ambient;
        let g = self.inradius.value();
        let lg = self.inradius.ln();
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, k) in self.kappa.iter().enumerate() {
            if *k == 0.0 {
                continue;
            }
            let coeff = (n as f64 - a as f64) * k * g.powi(-(a as i32));
            acc += coeff * (s * lg).exp() / (s - a as f64);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn samples() -> Vec<Complex64> {
        vec![cx(2.5, 0.0), cx(1.7, 3.0), cx(3.1, -7.5), cx(0.4, 1.1), cx(-0.6, 2.2)]
    }

    #[test]
    fn square_zeta_collapses_to_a_single_ratio() {
        let g = MonophaseGenerator::square(Base::rational(1, 1));
        for s in samples() {
            let got = g.zeta().eval(s).unwrap();
            let want = (cx(3.0, 0.0) - s) * 2.0f64.ln();
            let want = want.exp() / (s * (s - 1.0));
            assert!((got - want).norm() <= 1e-13 * want.norm(), "s = {s}");
        }
    }

    #[test]
    fn interval_zeta_matches_two_sided_power() {
        for len in [1.0, 0.37] {
            let g = MonophaseGenerator::interval(Base::real(len));
            for s in samples() {
                let got = g.zeta().eval(s).unwrap();
                let want = 2.0 * ((len / 2.0).ln() * s).exp() / s;
                assert!((got - want).norm() <= 1e-13 * want.norm(), "len = {len}, s = {s}");
            }
        }
    }

    #[test]
    fn disk_zeta_is_two_pi_over_s_s_minus_one() {
        let g = MonophaseGenerator::disk(Base::rational(1, 1));
        for s in samples() {
            let got = g.zeta().eval(s).unwrap();
            let want = 2.0 * std::f64::consts::PI / (s * (s - 1.0));
            assert!((got - want).norm() <= 1e-13 * want.norm(), "s = {s}");
        }
    }

    #[test]
    fn volumes_match_the_shapes() {
        assert!((MonophaseGenerator::square(Base::rational(1, 1)).volume() - 1.0).abs() < 1e-15);
        assert!(
            (MonophaseGenerator::equilateral_triangle(Base::rational(1, 1)).volume()
                - 3.0f64.sqrt() / 4.0)
                .abs()
                < 1e-15
        );
        assert!(
            (MonophaseGenerator::disk(Base::rational(1, 1)).volume() - std::f64::consts::PI)
                .abs()
                < 1e-14
        );
        assert!((MonophaseGenerator::cube(Base::rational(1, 2)).volume() - 0.125).abs() < 1e-15);
        let oct = MonophaseGenerator::octahedron(Base::rational(1, 2));
        assert!((oct.volume() - 2.0f64.sqrt() / 24.0).abs() < 1e-15);
    }

    #[test]
    fn tube_volume_saturates_at_the_inradius() {
        let g = MonophaseGenerator::cube(Base::rational(1, 1));
        let v = g.volume();
        assert!((g.tube_volume(0.5) - v).abs() < 1e-15);
        assert!((g.tube_volume(0.7) - v).abs() < 1e-15);
        let direct = 1.0 - (1.0 - 2.0 * 0.2f64).powi(3);
        assert!((g.tube_volume(0.2) - direct).abs() < 1e-15);
    }

    #[test]
    fn scaling_multiplies_the_zeta_by_lambda_to_the_s() {
        let shapes = vec![
            MonophaseGenerator::interval(Base::real(0.8)),
            MonophaseGenerator::equilateral_triangle(Base::rational(1, 2)),
            MonophaseGenerator::cube(Base::real(1.3)),
            MonophaseGenerator::octahedron(Base::rational(2, 3)),
        ];
        for shape in shapes {
            for lambda in [2.0, 1.0 / 3.0, 1.4] {
                let scaled = shape.scaled(lambda);
                for s in samples() {
                    let want = (s * lambda.ln()).exp() * shape.zeta_at(s);
                    let got = scaled.zeta_at(s);
                    assert!(
                        (got - want).norm() <= 1e-12 * (1.0 + want.norm()),
                        "lambda = {lambda}, s = {s}"
                    );
                }
            }
        }
    }

    #[test]
    fn expression_tree_and_direct_evaluation_agree() {
        let g = MonophaseGenerator::octahedron(Base::rational(1, 2));
        for s in samples() {
            let a = g.zeta().eval(s).unwrap();
            let b = g.zeta_at(s);
            assert!((a - b).norm() <= 1e-13 * (1.0 + b.norm()));
        }
    }
}
