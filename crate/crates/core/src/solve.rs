//! Generalized Vandermonde systems: recover polynomial coefficients from
//! evaluations when the exponent set is arbitrary (not 0..n-1).

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::matrix::FieldMatrix;

/// Solves M * X = V for X, where M[i][j] = points[i]^exponents[j] and each
/// entry of X and V is itself a matrix (the right-hand sides are solved
/// simultaneously by applying every row operation to whole matrices).
///
/// `points` must be pairwise distinct and nonzero; `values[i]` is the
/// observed evaluation at `points[i]`. Returns the coefficient matrices in
/// the order of `exponents`. Exact arithmetic: Gaussian elimination with the
/// first nonzero pivot, no stability concern over a field.
pub fn gen_vandermonde_solve(
    exponents: &[u64],
    points: &[FieldElement],
    values: &[FieldMatrix],
) -> Result<Vec<FieldMatrix>> {
    let n = exponents.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("empty system".into()));
    }
    if points.len() != n || values.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} exponents vs {} points vs {} values",
            n,
            points.len(),
            values.len()
        )));
    }
    let field = points[0].field();
    for p in points {
        if p.field() != field {
            return Err(Error::FieldMismatch(field.modulus(), p.field().modulus()));
        }
        if p.is_zero() {
            return Err(Error::SingularSystem(
                "evaluation point 0 is not allowed".into(),
            ));
        }
    }
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if a == b {
                return Err(Error::SingularSystem(format!(
                    "duplicate evaluation point {a}"
                )));
            }
        }
    }
    let (vr, vc) = (values[0].rows(), values[0].cols());
    for v in values {
        if v.field() != field {
            return Err(Error::FieldMismatch(field.modulus(), v.field().modulus()));
        }
        if v.rows() != vr || v.cols() != vc {
            return Err(Error::DimensionMismatch(
                "right-hand sides of unequal shape".into(),
            ));
        }
    }

    let mut m: Vec<Vec<FieldElement>> = points
        .iter()
        .map(|p| exponents.iter().map(|&e| p.pow(e)).collect())
        .collect();
    let mut rhs: Vec<FieldMatrix> = values.to_vec();

    solve_in_place(field, &mut m, &mut rhs)?;
    Ok(rhs)
}

/// Determinant-style invertibility test for the matrix M[i][j] =
/// points[i]^exponents[j], without right-hand sides. Used by the security
/// audits, where only singular / nonsingular matters.
pub fn power_matrix_invertible(exponents: &[u64], points: &[FieldElement]) -> bool {
    let n = exponents.len();
    if n == 0 || points.len() != n {
        return false;
    }
    let mut m: Vec<Vec<FieldElement>> = points
        .iter()
        .map(|p| exponents.iter().map(|&e| p.pow(e)).collect())
        .collect();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => return false,
        };
        m.swap(col, pivot);
        let inv = m[col][col].inv().expect("pivot is nonzero");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col] * inv;
            #[allow(clippy::needless_range_loop)] // two rows of m in play
            for c in col..n {
                let delta = factor * m[col][c];
                m[r][c] = m[r][c] - delta;
            }
        }
    }
    true
}

fn solve_in_place(
    field: PrimeField,
    m: &mut [Vec<FieldElement>],
    rhs: &mut [FieldMatrix],
) -> Result<()> {
    let n = m.len();
    // forward elimination
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::SingularSystem(format!("no pivot in column {col}")))?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].inv().expect("pivot is nonzero");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col] * inv;
            #[allow(clippy::needless_range_loop)] // two rows of m in play
            for c in col..n {
                let delta = factor * m[col][c];
                m[r][c] = m[r][c] - delta;
            }
            let delta = rhs[col].scalar_mul(factor);
            rhs[r] = rhs[r].sub(&delta)?;
        }
    }
    // back substitution
    for col in (0..n).rev() {
        let inv = m[col][col].inv().expect("pivot is nonzero");
        rhs[col] = rhs[col].scalar_mul(inv);
        m[col][col] = field.one();
        for r in 0..col {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col];
            let delta = rhs[col].scalar_mul(factor);
            rhs[r] = rhs[r].sub(&delta)?;
            m[r][col] = field.zero();
        }
    }
    Ok(())
}
