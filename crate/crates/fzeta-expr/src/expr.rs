use std::fmt;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::ExprError;

/// Relative threshold below which a denominator counts as vanished.
///
/// Evaluation refuses to divide when `|den| < POLE_GUARD_REL * (1 + |num|)`;
/// the caller is sitting on (or numerically indistinguishable from) a pole
/// and gets [`ExprError::PoleHit`] instead of a garbage quotient.
pub const POLE_GUARD_REL: f64 = 1e-12;

/// A positive base for the exponential `b^s`.
///
/// Bases that are known exactly as ratios of integers (2, 3, 1/2, 8/27, ...)
/// keep that form so logarithms can be taken accurately and serialization is
/// lossless; everything else (1/sqrt(3), a Moran scaling ratio fitted from
/// data) is a plain positive float.
#[derive(Clone, Debug, PartialEq)]
pub enum Base {
    /// An exact positive rational `num / den`.
    Rational(u64, u64),
    /// An arbitrary positive real.
    Real(f64),
}

impl Base {
    pub fn rational(num: u64, den: u64) -> Self {
        assert!(num > 0 && den > 0, "base must be a positive rational");
        Base::Rational(num, den)
    }

    pub fn real(x: f64) -> Self {
        assert!(x.is_finite() && x > 0.0, "base must be a finite positive real");
        Base::Real(x)
    }

    /// Numeric value of the base.
    pub fn value(&self) -> f64 {
        match *self {
            Base::Rational(n, d) => n as f64 / d as f64,
            Base::Real(x) => x,
        }
    }

    /// Natural log of the base; split into `ln n - ln d` for rationals so
    /// bases like 1/3 do not lose bits in the division first.
    pub fn ln(&self) -> f64 {
        match *self {
            Base::Rational(n, d) => (n as f64).ln() - (d as f64).ln(),
            Base::Real(x) => x.ln(),
        }
    }
}

/// A closed-form expression in one complex variable `s`.
///
/// `ExpBase(b)` denotes `b^s`. Affine exponents are normalized away at
/// construction time: `b^(s-a)` is written `Mul[Const(b^-a), ExpBase(b)]`,
/// and `(sqrt 3)^(1-s) 2^-s` collapses to `Mul[Const(sqrt 3),
/// ExpBase(1/(2 sqrt 3))]`, so the grammar never needs exponent arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Div(Box<Expr>, Box<Expr>),
    ExpBase(Base),
}

impl Expr {
    pub fn constant(c: impl Into<Complex64>) -> Self {
        Expr::Const(c.into())
    }

    pub fn real(x: f64) -> Self {
        Expr::Const(Complex64::new(x, 0.0))
    }

    pub fn var() -> Self {
        Expr::Var
    }

    pub fn add(terms: Vec<Expr>) -> Self {
        assert!(!terms.is_empty(), "empty sum");
        if terms.len() == 1 {
            terms.into_iter().next().unwrap()
        } else {
            Expr::Add(terms)
        }
    }

    pub fn mul(factors: Vec<Expr>) -> Self {
        assert!(!factors.is_empty(), "empty product");
        if factors.len() == 1 {
            factors.into_iter().next().unwrap()
        } else {
            Expr::Mul(factors)
        }
    }

    pub fn div(num: Expr, den: Expr) -> Self {
        Expr::Div(Box::new(num), Box::new(den))
    }

    pub fn exp_base(base: Base) -> Self {
        Expr::ExpBase(base)
    }

    /// The linear factor `s - c`.
    pub fn s_minus(c: impl Into<Complex64>) -> Self {
        Expr::Add(vec![Expr::Var, Expr::Const(-c.into())])
    }

    /// `coeff * b^s`, the building block of Dirichlet polynomials.
    pub fn scaled_exp(coeff: f64, base: Base) -> Self {
        Expr::Mul(vec![Expr::real(coeff), Expr::ExpBase(base)])
    }

    /// Evaluate at `s`. Fails with [`ExprError::PoleHit`] when any
    /// denominator vanishes to working precision at `s`.
    pub fn eval(&self, s: Complex64) -> Result<Complex64, ExprError> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Var => Ok(s),
            Expr::Add(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in terms {
                    acc += t.eval(s)?;
                }
                Ok(acc)
            }
            Expr::Mul(factors) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for f in factors {
                    acc *= f.eval(s)?;
                }
                Ok(acc)
            }
            Expr::Div(num, den) => {
                let n = num.eval(s)?;
                let d = den.eval(s)?;
                if d.norm() < POLE_GUARD_REL * (1.0 + n.norm()) {
                    Err(ExprError::PoleHit { at: s, den_mag: d.norm() })
                } else {
                    Ok(n / d)
                }
            }
            Expr::ExpBase(b) => Ok((s * b.ln()).exp()),
        }
    }

    /// Symbolic derivative with respect to `s`. The grammar is closed under
    /// differentiation: `(b^s)' = ln(b) b^s` and quotients differentiate into
    /// quotients.
    pub fn deriv(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::real(0.0),
            Expr::Var => Expr::real(1.0),
            Expr::Add(terms) => Expr::Add(terms.iter().map(|t| t.deriv()).collect()),
            Expr::Mul(factors) => {
                let mut terms = Vec::with_capacity(factors.len());
                for i in 0..factors.len() {
                    let mut prod: Vec<Expr> = Vec::with_capacity(factors.len());
                    for (j, f) in factors.iter().enumerate() {
                        prod.push(if i == j { f.deriv() } else { f.clone() });
                    }
                    terms.push(Expr::Mul(prod));
                }
                Expr::Add(terms)
            }
            Expr::Div(num, den) => {
                let n = num.as_ref().clone();
                let d = den.as_ref().clone();
                let top = Expr::Add(vec![
                    Expr::Mul(vec![n.deriv(), d.clone()]),
                    Expr::Mul(vec![Expr::real(-1.0), n, d.deriv()]),
                ]);
                Expr::Div(Box::new(top), Box::new(Expr::Mul(vec![d.clone(), d])))
            }
            Expr::ExpBase(b) => {
                Expr::Mul(vec![Expr::real(b.ln()), Expr::ExpBase(b.clone())])
            }
        }
    }

    /// True when every constant in the tree is real. Such expressions
    /// satisfy the reflection `f(conj s) = conj(f(s))`, which is what makes
    /// complex dimensions come in conjugate pairs.
    pub fn has_real_coefficients(&self) -> bool {
        match self {
            Expr::Const(c) => c.im == 0.0,
            Expr::Var | Expr::ExpBase(_) => true,
            Expr::Add(ts) => ts.iter().all(|t| t.has_real_coefficients()),
            Expr::Mul(fs) => fs.iter().all(|f| f.has_real_coefficients()),
            Expr::Div(n, d) => n.has_real_coefficients() && d.has_real_coefficients(),
        }
    }
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("({}{}i)", c.re, c.im)
    } else {
        format!("({}+{}i)", c.re, c.im)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{}", fmt_complex(*c)),
            Expr::Var => write!(f, "s"),
            Expr::Add(ts) => {
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Expr::Mul(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Expr::Div(n, d) => write!(f, "({n})/({d})"),
            Expr::ExpBase(Base::Rational(n, d)) => {
                if *d == 1 {
                    write!(f, "{n}^s")
                } else {
                    write!(f, "({n}/{d})^s")
                }
            }
            Expr::ExpBase(Base::Real(x)) => write!(f, "{x}^s"),
        }
    }
}

fn base_to_value(b: &Base) -> Value {
    match *b {
        Base::Rational(n, d) => json!({ "num": n, "den": d }),
        // Rust's float Display prints the shortest string that parses back
        // to the same f64, so the round trip is exact.
        Base::Real(x) => Value::String(format!("{x}")),
    }
}

fn expr_to_value(e: &Expr) -> Value {
    match e {
        Expr::Const(c) => json!({ "const": [c.re, c.im] }),
        Expr::Var => Value::String("var".to_owned()),
        Expr::Add(ts) => json!({ "add": ts.iter().map(expr_to_value).collect::<Vec<_>>() }),
        Expr::Mul(fs) => json!({ "mul": fs.iter().map(expr_to_value).collect::<Vec<_>>() }),
        Expr::Div(n, d) => json!({ "div": [expr_to_value(n), expr_to_value(d)] }),
        Expr::ExpBase(b) => json!({ "expbase": base_to_value(b) }),
    }
}

fn base_from_value(v: &Value) -> Result<Base, String> {
    match v {
        Value::String(s) => {
            let x: f64 = s.parse().map_err(|e| format!("bad base literal {s:?}: {e}"))?;
            if !(x.is_finite() && x > 0.0) {
                return Err(format!("base must be positive and finite, got {x}"));
            }
            Ok(Base::Real(x))
        }
        Value::Object(map) => {
            let num = map.get("num").and_then(Value::as_u64);
            let den = map.get("den").and_then(Value::as_u64);
            match (num, den) {
                (Some(n), Some(d)) if n > 0 && d > 0 => Ok(Base::Rational(n, d)),
                _ => Err("rational base needs positive integer \"num\" and \"den\"".into()),
            }
        }
        other => Err(format!("expected base string or {{num, den}}, got {other}")),
    }
}

fn expr_from_value(v: &Value) -> Result<Expr, String> {
    match v {
        Value::String(s) if s == "var" => Ok(Expr::Var),
        Value::Object(map) if map.len() == 1 => {
            let (tag, body) = map.iter().next().unwrap();
            match tag.as_str() {
                "const" => {
                    let parts = body
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or("\"const\" takes [re, im]")?;
                    let re = parts[0].as_f64().ok_or("non-numeric real part")?;
                    let im = parts[1].as_f64().ok_or("non-numeric imaginary part")?;
                    Ok(Expr::Const(Complex64::new(re, im)))
                }
                "add" | "mul" => {
                    let items = body.as_array().ok_or("\"add\"/\"mul\" take a list")?;
                    if items.is_empty() {
                        return Err(format!("\"{tag}\" needs at least one operand"));
                    }
                    let children = items
                        .iter()
                        .map(expr_from_value)
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(if tag == "add" { Expr::Add(children) } else { Expr::Mul(children) })
                }
                "div" => {
                    let parts = body
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or("\"div\" takes [numerator, denominator]")?;
                    Ok(Expr::Div(
                        Box::new(expr_from_value(&parts[0])?),
                        Box::new(expr_from_value(&parts[1])?),
                    ))
                }
                "expbase" => Ok(Expr::ExpBase(base_from_value(body)?)),
                other => Err(format!("unknown expression tag {other:?}")),
            }
        }
        other => Err(format!("expected \"var\" or a single-key object, got {other}")),
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        expr_to_value(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        expr_from_value(&v).map_err(D::Error::custom)
    }
}

impl Expr {
    /// Serialize to the tagged JSON interchange form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expression serialization is infallible")
    }

    /// Parse the tagged JSON interchange form.
    pub fn from_json(text: &str) -> Result<Expr, ExprError> {
        serde_json::from_str(text).map_err(|e| ExprError::Invalid(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cantor_zeta() -> Expr {
        // 1 / (3^s - 2)
        Expr::div(
            Expr::real(1.0),
            Expr::add(vec![Expr::exp_base(Base::rational(3, 1)), Expr::real(-2.0)]),
        )
    }

    #[test]
    fn eval_rational_points() {
        let z = cantor_zeta();
        let v = z.eval(Complex64::new(2.0, 0.0)).unwrap();
        assert!((v - Complex64::new(1.0 / 7.0, 0.0)).norm() < 1e-15);
        let v = z.eval(Complex64::new(1.0, 0.0)).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_refuses_pole() {
        let z = cantor_zeta();
        let d = (2.0f64).ln() / (3.0f64).ln();
        match z.eval(Complex64::new(d, 0.0)) {
            Err(ExprError::PoleHit { .. }) => {}
            other => panic!("expected PoleHit, got {other:?}"),
        }
    }

    #[test]
    fn derivative_of_exponential() {
        let e = Expr::exp_base(Base::rational(3, 1));
        let de = e.deriv();
        let s = Complex64::new(0.7, -1.3);
        let expect = (3.0f64).ln() * (s * (3.0f64).ln()).exp();
        assert!((de.eval(s).unwrap() - expect).norm() < 1e-13 * expect.norm());
    }

    #[test]
    fn quotient_rule_matches_difference_quotient() {
        let z = cantor_zeta();
        let dz = z.deriv();
        let s = Complex64::new(1.5, 2.0);
        let h = 1e-6;
        let num = (z.eval(s + Complex64::new(h, 0.0)).unwrap()
            - z.eval(s - Complex64::new(h, 0.0)).unwrap())
            / (2.0 * h);
        assert!((dz.eval(s).unwrap() - num).norm() < 1e-8);
    }

    #[test]
    fn json_round_trip() {
        let z = Expr::mul(vec![
            Expr::constant(Complex64::new(0.5, -1.25)),
            Expr::exp_base(Base::real(1.0 / 3.0f64.sqrt())),
            cantor_zeta(),
        ]);
        let text = z.to_json();
        let back = Expr::from_json(&text).unwrap();
        assert_eq!(z, back);
        let s = Complex64::new(0.31, 4.7);
        assert!((z.eval(s).unwrap() - back.eval(s).unwrap()).norm() == 0.0);
    }

    #[test]
    fn json_tags_are_stable() {
        let z = cantor_zeta();
        let text = z.to_json();
        assert!(text.contains("\"div\""));
        assert!(text.contains("\"add\""));
        assert!(text.contains("\"expbase\""));
        assert!(text.contains("\"const\""));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert!(v.get("div").is_some());
    }

    #[test]
    fn var_serializes_as_bare_string() {
        assert_eq!(Expr::var().to_json(), "\"var\"");
        assert_eq!(Expr::from_json("\"var\"").unwrap(), Expr::Var);
    }

    #[test]
    fn real_base_round_trips_exactly() {
        let b = Base::real(1.0 / (2.0 * 3.0f64.sqrt()));
        let e = Expr::exp_base(b.clone());
        let back = Expr::from_json(&e.to_json()).unwrap();
        match back {
            Expr::ExpBase(Base::Real(x)) => assert_eq!(x, b.value()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
