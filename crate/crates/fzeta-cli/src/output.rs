//! Deterministic text output: fixed-width float formatting and small
//! CSV/JSON assembly helpers shared by the subcommands.

use num_complex::Complex64;

use crate::CliError;

/// A float printed with 17 significant digits, enough to reproduce the
/// exact bit pattern on read-back.
pub fn sig(x: f64) -> String {
    format!("{x:.16e}")
}

/// Complex value as two CSV fields.
pub fn sig_pair(z: Complex64) -> (String, String) {
    (sig(z.re), sig(z.im))
}

/// Parses `re` or `re,im` or `re+imi` / `re-imi` into a complex number.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let t = text.trim();
    if let Some((re, im)) = t.split_once(',') {
        let re: f64 = re
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad real part in {text:?}")))?;
        let im: f64 = im
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad imaginary part in {text:?}")))?;
        return Ok(Complex64::new(re, im));
    }
    if let Some(body) = t.strip_suffix('i') {
        // Split at the sign separating the two parts, skipping a leading
        // sign and exponent signs.
        let bytes = body.as_bytes();
        for pos in (1..bytes.len()).rev() {
            let c = bytes[pos] as char;
            if (c == '+' || c == '-') && !matches!(bytes[pos - 1] as char, 'e' | 'E') {
                let re: f64 = body[..pos]
                    .parse()
                    .map_err(|_| CliError::usage(format!("bad real part in {text:?}")))?;
                let im: f64 = match &body[pos..] {
                    "+" => 1.0,
                    "-" => -1.0,
                    s => s
                        .parse()
                        .map_err(|_| CliError::usage(format!("bad imaginary part in {text:?}")))?,
                };
                return Ok(Complex64::new(re, im));
            }
        }
        let im: f64 = body
            .parse()
            .map_err(|_| CliError::usage(format!("bad imaginary value in {text:?}")))?;
        return Ok(Complex64::new(0.0, im));
    }
    let re: f64 = t
        .parse()
        .map_err(|_| CliError::usage(format!("cannot parse {text:?} as a complex number")))?;
    Ok(Complex64::new(re, 0.0))
}

/// An in-memory CSV table written through the `csv` crate, with all
/// numeric fields preformatted by [`sig`].
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("in-memory csv");
        Table { writer }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.writer.write_record(fields).expect("in-memory csv");
    }

    pub fn finish(self) -> String {
        String::from_utf8(self.writer.into_inner().expect("in-memory csv"))
            .expect("csv output is ascii")
    }
}

/// A log-spaced grid of `points` values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !(lo > 0.0 && hi > lo) || !hi.is_finite() {
        return Err(CliError::usage(format!(
            "log grid needs 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    if points < 2 {
        return Err(CliError::usage(format!("log grid needs >= 2 points, got {points}")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let h = (b - a) / (points - 1) as f64;
    // Pin the endpoints: exp(ln x) can land one ulp past x, which matters
    // when the upper end sits exactly on a validity ceiling.
    Ok((0..points)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == points - 1 {
                hi
            } else {
                (a + h * i as f64).exp()
            }
        })
        .collect())
}
