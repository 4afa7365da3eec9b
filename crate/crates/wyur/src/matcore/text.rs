//! Plain-text matrix serialization.
//!
//! The format is line oriented: the first line holds "rows cols", then each
//! row is one line of whitespace-separated complex entries written as
//! "a+bi" or "a-bi" with plain decimal components. The parser is tolerant
//! about line breaks and accepts pure-real ("1.5") and pure-imaginary
//! ("2i", "-i") entries as well.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

/// Formats one complex entry as "a+bi" or "a-bi".
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parses an entry written as "a+bi", "a-bi", "a", or "bi".
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("invalid complex entry `{token}`"));
    let t = token.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if !t.ends_with('i') && !t.ends_with('I') {
        let re: f64 = t.parse().map_err(|_| bad())?;
        return Ok(Complex64::new(re, 0.0));
    }
    let body = &t[..t.len() - 1];
    // Split at the sign that separates the real and imaginary parts: the
    // last '+'/'-' that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let ch = bytes[k];
        if (ch == b'+' || ch == b'-') && bytes[k - 1] != b'e' && bytes[k - 1] != b'E' {
            split = Some(k);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let re: f64 = re_str.parse().map_err(|_| bad())?;
    let im: f64 = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Writes a matrix in the line-oriented text format.
pub fn format_matrix(m: &ComplexMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let line: Vec<String> = (0..m.cols()).map(|j| format_complex(m.get(i, j))).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a matrix from the text format; whitespace of any kind separates
/// tokens, so strict line structure is not required.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut tokens = text.split_whitespace();
    let rows: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("missing row count".into()))?
        .parse()
        .map_err(|_| Error::Parse("invalid row count".into()))?;
    let cols: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("missing column count".into()))?
        .parse()
        .map_err(|_| Error::Parse("invalid column count".into()))?;
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let tok = tokens
            .next()
            .ok_or_else(|| Error::Parse("matrix body ended early".into()))?;
        entries.push(parse_complex(tok)?);
    }
    if tokens.next().is_some() {
        return Err(Error::Parse("trailing tokens after matrix body".into()));
    }
    ComplexMatrix::new(rows, cols, entries)
}
