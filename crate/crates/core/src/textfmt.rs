//! The shared plain-text matrix format.
//!
//! First line: `ROWS COLS`. Then row-major entries as `re,im` tokens
//! separated by whitespace (line breaks between rows are conventional
//! but not required). Non-finite values are rejected on read and can
//! never be produced on write because `ComplexMatrix` holds finite
//! entries only.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut tokens = text.split_whitespace();
    let rows: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad row count: {e}")))?;
    let cols: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("missing column count".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad column count: {e}")))?;
    let mut entries = Vec::with_capacity(rows * cols);
    for k in 0..rows * cols {
        let tok = tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {} entries, found {k}", rows * cols)))?;
        entries.push(parse_entry(tok)?);
    }
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse(format!("trailing token {extra:?}")));
    }
    ComplexMatrix::new(rows, cols, entries)
}

fn parse_entry(tok: &str) -> Result<Complex64> {
    let (re, im) = tok
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("entry {tok:?} is not of the form re,im")))?;
    let re: f64 = re
        .parse()
        .map_err(|e| Error::Parse(format!("bad real part {re:?}: {e}")))?;
    let im: f64 = im
        .parse()
        .map_err(|e| Error::Parse(format!("bad imaginary part {im:?}: {e}")))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(Error::Parse(format!("non-finite entry {tok:?}")));
    }
    Ok(Complex64::new(re, im))
}

/// Formats with 17 significant digits, enough to round-trip any f64.
pub fn format_matrix(m: &ComplexMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m.get(i, j);
                format!("{:.16e},{:.16e}", z.re, z.im)
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
