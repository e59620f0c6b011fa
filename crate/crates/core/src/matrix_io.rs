//! Plain-text matrix files, bit-exact.
//!
//! Line 1 is `rows cols q`; each of the next `rows` lines holds `cols`
//! base-10 values in `[0, q)`, separated by single spaces; the file ends
//! with one newline. Parsing accepts exactly this shape and nothing else,
//! so write-then-read and read-then-write are both identities on the byte
//! level.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::FieldMatrix;

/// Guard against absurd allocations from a corrupt header.
const MAX_ELEMENTS: u64 = 100_000_000;

pub fn matrix_to_string(m: &FieldMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", m.rows(), m.cols(), m.field().modulus());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", m.get(i, j).value());
        }
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<FieldMatrix> {
    let fail = |msg: &str| Error::MatrixFormat(msg.to_string());
    if !text.ends_with('\n') {
        return Err(fail("missing trailing newline"));
    }
    let mut lines = text.split('\n');
    let header = lines.next().ok_or_else(|| fail("empty input"))?;
    let fields = split_strict(header)?;
    let [rows, cols, q] = fields.as_slice() else {
        return Err(fail("header must be exactly `rows cols q`"));
    };
    let (rows, cols, q) = (*rows, *cols, *q);
    if rows == 0 || cols == 0 {
        return Err(fail("matrix dimensions must be positive"));
    }
    if rows.saturating_mul(cols) > MAX_ELEMENTS {
        return Err(fail("matrix too large"));
    }
    let field = PrimeField::new(q)?;

    let mut values = Vec::with_capacity((rows * cols) as usize);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::MatrixFormat(format!("expected {rows} rows, found {i}")))?;
        let row = split_strict(line)?;
        if row.len() != cols as usize {
            return Err(Error::MatrixFormat(format!(
                "row {} has {} values, expected {cols}",
                i + 1,
                row.len()
            )));
        }
        for v in row {
            if v >= q {
                return Err(Error::MatrixFormat(format!(
                    "value {v} is outside [0, {q})"
                )));
            }
            values.push(v);
        }
    }
    // the trailing newline leaves exactly one empty fragment
    match (lines.next(), lines.next()) {
        (Some(""), None) => {}
        _ => return Err(fail("trailing content after the last row")),
    }
    FieldMatrix::from_rows(field, rows as usize, cols as usize, &values)
}

/// Splits on single spaces and parses every token; empty tokens (leading,
/// trailing, or doubled spaces) are format errors.
fn split_strict(line: &str) -> Result<Vec<u64>> {
    line.split(' ')
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| Error::MatrixFormat(format!("bad value {tok:?}")))
        })
        .collect()
}

pub fn read_matrix_file(path: &Path) -> Result<FieldMatrix> {
    let text = fs::read_to_string(path)?;
    parse_matrix(&text)
}

pub fn write_matrix_file(path: &Path, m: &FieldMatrix) -> Result<()> {
    fs::write(path, matrix_to_string(m))?;
    Ok(())
}
