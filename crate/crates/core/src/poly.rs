//! Sparse polynomials whose coefficients are matrices over a prime field.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::matrix::FieldMatrix;

/// A polynomial sum(M_e * x^e) with matrix coefficients of one fixed shape.
/// Zero coefficients are never stored, so `support()` is exactly the set of
/// exponents with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    field: PrimeField,
    rows: usize,
    cols: usize,
    terms: BTreeMap<u64, FieldMatrix>,
}

impl SparsePoly {
    pub fn new(field: PrimeField, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "coefficient shape must be positive");
        SparsePoly {
            field,
            rows,
            cols,
            terms: BTreeMap::new(),
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn coeff_rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn coeff_cols(&self) -> usize {
        self.cols
    }

    /// Adds `coeff * x^exponent` into the polynomial. Coefficients landing on
    /// the same exponent are summed; a resulting zero coefficient is removed.
    pub fn add_term(&mut self, exponent: u64, coeff: FieldMatrix) -> Result<()> {
        if coeff.field() != self.field {
            return Err(Error::FieldMismatch(
                self.field.modulus(),
                coeff.field().modulus(),
            ));
        }
        if coeff.rows() != self.rows || coeff.cols() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "coefficient {}x{} in a {}x{} polynomial",
                coeff.rows(),
                coeff.cols(),
                self.rows,
                self.cols
            )));
        }
        let merged = match self.terms.remove(&exponent) {
            Some(existing) => existing.add(&coeff)?,
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(exponent, merged);
        }
        Ok(())
    }

    /// Exponents with nonzero coefficients, ascending.
    pub fn support(&self) -> Vec<u64> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, exponent: u64) -> Option<&FieldMatrix> {
        self.terms.get(&exponent)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &FieldMatrix)> {
        self.terms.iter().map(|(&e, m)| (e, m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates at a point with square-and-multiply powers per exponent.
    pub fn eval(&self, point: FieldElement) -> Result<FieldMatrix> {
        if point.field() != self.field {
            return Err(Error::FieldMismatch(
                self.field.modulus(),
                point.field().modulus(),
            ));
        }
        let mut acc = FieldMatrix::zeros(self.field, self.rows, self.cols);
        for (&e, m) in &self.terms {
            acc = acc.add(&m.scalar_mul(point.pow(e)))?;
        }
        Ok(acc)
    }
}

/// Product of two matrix polynomials by exponent-wise convolution. Inner
/// dimensions must agree; coefficients that sum to zero are dropped, so the
/// result is canonical.
pub fn poly_mul(a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field.modulus(), b.field.modulus()));
    }
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "coefficient shapes {}x{} * {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = SparsePoly::new(a.field, a.rows, b.cols);
    for (&ea, ma) in &a.terms {
        for (&eb, mb) in &b.terms {
            out.add_term(ea + eb, ma.mul(mb)?)?;
        }
    }
    Ok(out)
}
