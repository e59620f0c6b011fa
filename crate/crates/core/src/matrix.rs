//! Dense row-major matrices over a prime field.

use std::fmt;

use rand_chacha::rand_core::RngCore;

use crate::error::{Error, Result};
use crate::field::{mul_mod, FieldElement, PrimeField};

/// A rows x cols matrix with all entries in one field, stored canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Builds from row-major raw values, reducing each into [0, q).
    pub fn from_rows(field: PrimeField, rows: usize, cols: usize, values: &[u64]) -> Result<Self> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {rows}x{cols} = {} values, got {}",
                rows * cols,
                values.len()
            )));
        }
        let q = field.modulus();
        Ok(FieldMatrix {
            field,
            rows,
            cols,
            data: values.iter().map(|&v| v % q).collect(),
        })
    }

    pub fn random<R: RngCore>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = FieldMatrix::zeros(field, rows, cols);
        for v in m.data.iter_mut() {
            *v = field.sample(rng).value();
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.element(self.data[i * self.cols + j])
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        assert_eq!(self.field, v.field(), "entry from a different field");
        self.data[i * self.cols + j] = v.value();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Raw row-major canonical values.
    pub fn values(&self) -> &[u64] {
        &self.data
    }

    fn check_same_shape(&self, rhs: &FieldMatrix) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(
                self.field.modulus(),
                rhs.field.modulus(),
            ));
        }
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_same_shape(rhs)?;
        let q = self.field.modulus();
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| {
                let s = a + b;
                if s >= q {
                    s - q
                } else {
                    s
                }
            })
            .collect();
        Ok(FieldMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_same_shape(rhs)?;
        let q = self.field.modulus();
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| if a >= b { a - b } else { a + q - b })
            .collect();
        Ok(FieldMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scalar_mul(&self, s: FieldElement) -> FieldMatrix {
        assert_eq!(self.field, s.field(), "scalar from a different field");
        let q = self.field.modulus();
        let sv = s.value();
        FieldMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| mul_mod(a, sv, q)).collect(),
        }
    }

    /// Classic matrix product. Each summand is reduced before accumulation,
    /// so the u128 accumulator cannot overflow for any inner dimension that
    /// fits in memory.
    pub fn mul(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(
                self.field.modulus(),
                rhs.field.modulus(),
            ));
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let q = self.field.modulus();
        let mut out = FieldMatrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc += mul_mod(self.data[i * self.cols + k], rhs.data[k * rhs.cols + j], q)
                        as u128;
                }
                out.data[i * rhs.cols + j] = (acc % q as u128) as u64;
            }
        }
        Ok(out)
    }

    /// Copies the block with top-left corner (r0, c0).
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<FieldMatrix> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "block {rows}x{cols} at ({r0},{c0}) exceeds {}x{}",
                self.rows, self.cols
            )));
        }
        let mut out = FieldMatrix::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.data[(r0 + i) * self.cols + (c0 + j)];
            }
        }
        Ok(out)
    }

    /// Assembles a grid of equally shaped blocks, row-major over the grid.
    pub fn from_blocks(blocks: &[Vec<FieldMatrix>]) -> Result<FieldMatrix> {
        if blocks.is_empty() || blocks[0].is_empty() {
            return Err(Error::DimensionMismatch("empty block grid".into()));
        }
        let (br, bc) = (blocks[0][0].rows, blocks[0][0].cols);
        let field = blocks[0][0].field;
        for row in blocks {
            if row.len() != blocks[0].len() {
                return Err(Error::DimensionMismatch("ragged block grid".into()));
            }
            for b in row {
                if b.rows != br || b.cols != bc {
                    return Err(Error::DimensionMismatch("unequal block shapes".into()));
                }
                if b.field != field {
                    return Err(Error::FieldMismatch(field.modulus(), b.field.modulus()));
                }
            }
        }
        let mut out = FieldMatrix::zeros(field, br * blocks.len(), bc * blocks[0].len());
        for (gi, row) in blocks.iter().enumerate() {
            for (gj, b) in row.iter().enumerate() {
                for i in 0..br {
                    for j in 0..bc {
                        out.data[(gi * br + i) * out.cols + (gj * bc + j)] = b.data[i * bc + j];
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
