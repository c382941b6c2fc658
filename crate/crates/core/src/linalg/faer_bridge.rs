// SPDX-License-Identifier: Apache-2.0

//! Conversions between `ndarray` matrices and `faer`, plus thin wrappers
//! around the `faer` eigenvalue and linear-solve kernels.
//!
//! All heavy dense decompositions (general and self-adjoint eigenproblems,
//! LU solves) are delegated to `faer`; the rest of the crate only sees
//! `ndarray` types.

use faer::prelude::Solve;
use faer::Mat;
use ndarray::Array2;

use super::{CMat, C64};
use crate::error::{Error, Result};

type FC64 = faer::c64;

/// Convert an `ndarray` complex matrix into a `faer` matrix.
pub(crate) fn to_faer(m: &CMat) -> Mat<FC64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        FC64::new(z.re, z.im)
    })
}

/// Convert a `faer` complex matrix into an `ndarray` matrix.
pub(crate) fn from_faer(m: &Mat<FC64>) -> CMat {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| {
        let z = m[(i, j)];
        C64::new(z.re, z.im)
    })
}

/// Eigenvalues of a general complex square matrix.
pub(crate) fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let fm = to_faer(m);
    let vals = fm
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("eigenvalue computation failed: {e:?}")))?;
    Ok(vals.into_iter().map(|z| C64::new(z.re, z.im)).collect())
}

/// Eigenvalues of a Hermitian matrix (returned in ascending order).
///
/// The caller is responsible for passing an (at least numerically)
/// Hermitian matrix; only the lower triangle is referenced.
pub(crate) fn self_adjoint_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    let fm = to_faer(m);
    let evd = fm
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Numerical(format!("self-adjoint eigensolve failed: {e:?}")))?;
    let s = evd.S();
    let col = s.column_vector();
    // Eigenvalues of a Hermitian matrix are real; the complex container
    // carries round-off imaginary parts only.
    let mut vals: Vec<f64> = (0..col.nrows()).map(|i| col[i].re).collect();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(vals)
}

/// Full eigendecomposition `M = U diag(S) U^{-1}` of a general complex
/// square matrix. Returns `(U, S)`.
pub(crate) fn eigendecomposition(m: &CMat) -> Result<(CMat, Vec<C64>)> {
    let fm = to_faer(m);
    let evd = fm
        .eigen()
        .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
    let u = evd.U();
    let n = u.nrows();
    let u_nd = Array2::from_shape_fn((n, n), |(i, j)| {
        let z = u[(i, j)];
        C64::new(z.re, z.im)
    });
    let s = evd.S();
    let s_col = s.column_vector();
    let vals: Vec<C64> = (0..n).map(|i| C64::new(s_col[i].re, s_col[i].im)).collect();
    Ok((u_nd, vals))
}

/// Solve `A X = B` with full-pivot LU.
pub(crate) fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.nrows() != a.ncols() || a.nrows() != b.nrows() {
        return Err(Error::Dimension(format!(
            "solve expects square A matching B rows, got A {}x{}, B {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let fa = to_faer(a);
    let fb = to_faer(b);
    let lu = fa.full_piv_lu();
    let x = lu.solve(&fb);
    Ok(from_faer(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn solve_recovers_identity_inverse() {
        let a = array![
            [C64::new(2.0, 1.0), C64::new(0.0, -1.0)],
            [C64::new(1.0, 0.0), C64::new(3.0, 0.0)]
        ];
        let eye = super::super::identity(2);
        let inv = solve(&a, &eye).unwrap();
        let prod = a.dot(&inv);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_z_are_plus_minus_one() {
        let sz = array![
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)]
        ];
        let vals = self_adjoint_eigenvalues(&sz).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }
}
