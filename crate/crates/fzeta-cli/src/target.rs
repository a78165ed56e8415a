//! Target naming: one string selects a catalog entry, a fractal string,
//! a scaling polynomial, or the Riemann zeta itself.

use fzeta_expr::Base;
use fzeta_spray::{catalog_entries, catalog_get, CatalogEntry, CatalogParams};
use fzeta_strings::FractalString;

use crate::CliError;

/// A parsed target name.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    /// The Riemann zeta function, for spot evaluation.
    Riemann,
    /// A catalog entry by name; `n` and `delta` come from flags.
    Entry(String),
    /// A fractal string built from one of the stock constructors.
    Str(StringSpec),
    /// A bare scaling polynomial `1 - sum r_j^s` from a ratio list.
    Moran(Vec<Base>),
}

/// Stock fractal strings nameable on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum StringSpec {
    /// Middle-third Cantor string.
    Cantor,
    /// Two-piece lattice string with ratio `1/3^a` pieces; `a = 1` is
    /// the Cantor string again.
    GeneralizedCantor(f64),
    /// Lengths `a`-string `j^-a - (j+1)^-a`.
    AString(f64),
}

impl StringSpec {
    pub fn build(&self) -> Result<FractalString, CliError> {
        match self {
            StringSpec::Cantor => Ok(FractalString::cantor()),
            StringSpec::GeneralizedCantor(a) => Ok(FractalString::generalized_cantor(*a)?),
            StringSpec::AString(a) => Ok(FractalString::a_string(*a)?),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            StringSpec::Cantor => "cantor string".into(),
            StringSpec::GeneralizedCantor(a) => format!("generalized cantor string, a = {a}"),
            StringSpec::AString(a) => format!("a-string, a = {a}"),
        }
    }
}

impl Target {
    /// Parses `riemann`, `string:...`, `moran:r1,r2,...`, or a catalog
    /// entry name.
    pub fn parse(text: &str) -> Result<Target, CliError> {
        let t = text.trim();
        if t == "riemann" {
            return Ok(Target::Riemann);
        }
        if let Some(body) = t.strip_prefix("string:") {
            return Ok(Target::Str(parse_string_spec(body)?));
        }
        if let Some(body) = t.strip_prefix("moran:") {
            let ratios = body
                .split(',')
                .map(parse_ratio)
                .collect::<Result<Vec<_>, _>>()?;
            if ratios.is_empty() {
                return Err(CliError::usage("moran: needs at least one ratio"));
            }
            return Ok(Target::Moran(ratios));
        }
        if catalog_entries().contains(&t) {
            return Ok(Target::Entry(t.to_string()));
        }
        Err(CliError::usage(format!(
            "unknown target {t:?}; expected riemann, string:<name>, moran:<ratios>, \
             or a catalog entry out of: {}",
            catalog_entries().join(", ")
        )))
    }

    /// Looks the entry up, applying the parameter flags.
    pub fn entry(&self, n: Option<u32>, delta: Option<f64>) -> Result<CatalogEntry, CliError> {
        match self {
            Target::Entry(name) => Ok(catalog_get(name, &CatalogParams { n, delta })?),
            _ => Err(CliError::usage(format!("{self:?} is not a catalog entry"))),
        }
    }
}

fn parse_string_spec(body: &str) -> Result<StringSpec, CliError> {
    match body.split_once('=') {
        None if body == "cantor" => Ok(StringSpec::Cantor),
        Some(("cantor", a)) => Ok(StringSpec::GeneralizedCantor(parse_param(a)?)),
        Some(("a", a)) => Ok(StringSpec::AString(parse_param(a)?)),
        _ => Err(CliError::usage(format!(
            "unknown string {body:?}; expected cantor, cantor=<a>, or a=<a>"
        ))),
    }
}

fn parse_param(text: &str) -> Result<f64, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad numeric parameter {text:?}")))
}

/// A scaling ratio, kept rational when written as `p/q`.
pub fn parse_ratio(text: &str) -> Result<Base, CliError> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let p: u64 = num
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad ratio numerator {num:?}")))?;
        let q: u64 = den
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad ratio denominator {den:?}")))?;
        if p == 0 || q == 0 || p >= q {
            return Err(CliError::usage(format!("ratio {t} is not inside (0, 1)")));
        }
        return Ok(Base::rational(p, q));
    }
    let r: f64 = t
        .parse()
        .map_err(|_| CliError::usage(format!("cannot parse ratio {t:?}")))?;
    if !(r > 0.0 && r < 1.0) {
        return Err(CliError::usage(format!("ratio {r} is not inside (0, 1)")));
    }
    Ok(Base::real(r))
}

/// Oscillation period of the entry's principal pole ladder, when it has
/// one.
pub fn entry_period(entry: &CatalogEntry) -> Option<f64> {
    entry.divisor.families().first().map(|f| f.period)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_four_target_families_parse() {
        assert_eq!(Target::parse("riemann").unwrap(), Target::Riemann);
        assert_eq!(
            Target::parse("sierpinski-gasket").unwrap(),
            Target::Entry("sierpinski-gasket".into())
        );
        assert_eq!(
            Target::parse("string:a=1.5").unwrap(),
            Target::Str(StringSpec::AString(1.5))
        );
        match Target::parse("moran:1/2,1/3").unwrap() {
            Target::Moran(r) => assert_eq!(r.len(), 2),
            other => panic!("expected moran target, got {other:?}"),
        }
        assert!(Target::parse("no-such-thing").is_err());
    }

    #[test]
    fn ratios_keep_their_rational_form() {
        assert_eq!(parse_ratio("1/2").unwrap(), Base::rational(1, 2));
        assert!(matches!(parse_ratio("0.61").unwrap(), Base::Real(_)));
        assert!(parse_ratio("3/2").is_err());
        assert!(parse_ratio("-0.5").is_err());
    }

    #[test]
    fn string_specs_build_real_strings() {
        let s = StringSpec::Cantor.build().unwrap();
        assert!((s.total_length() - 1.0).abs() < 1e-12);
        assert!(StringSpec::AString(1.0).build().is_ok());
        assert!(Target::parse("string:banach").is_err());
    }
}
