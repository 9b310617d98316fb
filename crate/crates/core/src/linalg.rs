//! Dense linear algebra on row-major `f64` buffers, backed by `nalgebra`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::{Error, Result};

const RESIDUAL_TOL: f64 = 1e-10;

/// Solves `a x = b` for a row-major `n x n` matrix by LU with partial
/// pivoting. Fails when the factorisation breaks down or the relative
/// residual exceeds `1e-10`.
pub(crate) fn solve(n: usize, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = DMatrix::from_row_slice(n, n, a);
    let rhs = DVector::from_column_slice(b);
    let x = m.clone().lu().solve(&rhs).ok_or(Error::Singular)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular);
    }
    let residual = (&m * &x - &rhs).amax();
    let scale = 1.0f64.max(rhs.amax()).max(m.amax() * x.amax());
    if residual > RESIDUAL_TOL * scale {
        return Err(Error::Singular);
    }
    Ok(x.iter().copied().collect())
}

/// Eigenvalues of a symmetric row-major matrix, in descending order.
pub(crate) fn symmetric_eigenvalues(n: usize, a: &[f64]) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, a);
    let mut vals: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| y.total_cmp(x));
    vals
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_solve() {
        let x = solve(2, &[2.0, 1.0, 1.0, 3.0], &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn singular_is_rejected() {
        assert_eq!(solve(2, &[1.0, 2.0, 2.0, 4.0], &[1.0, 1.0]), Err(Error::Singular));
    }

    #[test]
    fn eigenvalues_descend() {
        let v = symmetric_eigenvalues(2, &[0.0, 1.0, 1.0, 0.0]);
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] + 1.0).abs() < 1e-14);
    }
}
