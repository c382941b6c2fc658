// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra for finite-dimensional open quantum systems.
//!
//! The module provides the three core value types used everywhere else in the
//! crate — [`HermitianOperator`], [`DensityMatrix`], and [`SuperOperator`] —
//! together with the vectorization conventions that relate them.
//!
//! # Vectorization convention
//!
//! Density matrices are vectorized by **column stacking**: the matrix entry
//! `rho[(i, j)]` (row `i`, column `j`) lands at position `j * d + i` of the
//! vector. Under this convention, with the Kronecker product normalized as
//! `kron(A, B)[(i1*n + i2, j1*n + j2)] = A[(i1, j1)] * B[(i2, j2)]`,
//!
//! - left multiplication `rho -> A rho` is `kron(I, A)`,
//! - right multiplication `rho -> rho B` is `kron(B.t(), I)`,
//! - the commutator map `ad(H) rho = [H, rho]` is
//!   `kron(I, H) - kron(H.t(), I)`.
//!
//! The convention is fixed repo-wide; every superoperator in this crate is a
//! `d^2 x d^2` matrix acting on column-stacked states.

mod choi;
mod expm;
mod faer_bridge;
mod serialize;
mod spectrum;
mod spin;
mod superop;
mod types;

pub use choi::{choi_matrix, is_completely_positive, min_choi_eigenvalue};
pub use serialize::{complex_matrix_from_json, complex_matrix_to_json};
pub use spectrum::{group_spectrum, hermitian_eigenvalues, SpectralCluster};
pub use spin::spin_operators;
pub use superop::{
    ad, commutator_map, superop_compose, superop_exp, superop_spectrum, SuperOperator,
};
pub use types::{DensityMatrix, HermitianOperator};

use ndarray::Array2;
use num_complex::Complex64;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMat = Array2<C64>;

/// Tolerance for accepting and symmetrizing nearly-Hermitian input
/// (maximum entrywise deviation between a matrix and its adjoint).
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Tolerance on `|trace - 1|` when validating density matrices.
pub const TRACE_TOL: f64 = 1e-10;

/// Most negative admissible eigenvalue when validating positive
/// semidefiniteness of density matrices.
pub const PSD_EIG_TOL: f64 = -1e-10;

/// Most negative admissible Choi eigenvalue for a map to count as
/// completely positive.
pub const CP_EIG_TOL: f64 = -1e-9;

/// Identity matrix of dimension `d`.
pub fn identity(d: usize) -> CMat {
    Array2::eye(d)
}

/// Matrix exponential of a dense complex square matrix (Pade-13 scaling
/// and squaring; see [`superop_exp`] for the superoperator wrapper with a
/// normal-matrix fast path).
pub fn matrix_exp(m: &CMat) -> crate::error::Result<CMat> {
    expm::expm_pade(m)
}

/// Crate-internal access to the general eigendecomposition for modules
/// that need an eigenbasis (e.g. constant-control frame rotation).
pub(crate) fn eigendecomposition_for_control(
    m: &CMat,
) -> crate::error::Result<(CMat, Vec<C64>)> {
    faer_bridge::eigendecomposition(m)
}

/// Kronecker product with the row-major block convention
/// `kron(A, B)[(i1*n + i2, j1*n + j2)] = A[(i1, j1)] * B[(i2, j2)]`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i1 in 0..ar {
        for j1 in 0..ac {
            let s = a[(i1, j1)];
            if s == C64::new(0.0, 0.0) {
                continue;
            }
            for i2 in 0..br {
                for j2 in 0..bc {
                    out[(i1 * br + i2, j1 * bc + j2)] = s * b[(i2, j2)];
                }
            }
        }
    }
    out
}

/// Column-stack a `d x d` matrix into a length-`d^2` vector.
pub fn vectorize(m: &CMat) -> ndarray::Array1<C64> {
    let d = m.nrows();
    ndarray::Array1::from_shape_fn(d * d, |k| m[(k % d, k / d)])
}

/// Inverse of [`vectorize`]: reshape a length-`d^2` vector into a `d x d`
/// matrix under the column-stacking convention.
pub fn unvectorize(v: &ndarray::Array1<C64>) -> CMat {
    let d2 = v.len();
    let d = (d2 as f64).sqrt().round() as usize;
    assert_eq!(d * d, d2, "vector length must be a perfect square");
    Array2::from_shape_fn((d, d), |(i, j)| v[j * d + i])
}

/// Adjoint (conjugate transpose) of a matrix.
pub fn dagger(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

/// Trace of a square matrix.
pub fn trace(m: &CMat) -> C64 {
    m.diag().sum()
}

/// Frobenius norm.
pub fn frobenius_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum entrywise absolute value.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Maximum entrywise deviation between `m` and its adjoint.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let (r, c) = m.dim();
    if r != c {
        return f64::INFINITY;
    }
    let mut defect: f64 = 0.0;
    for i in 0..r {
        for j in 0..c {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    defect
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectorize_column_stacking_layout() {
        // Entry (i, j) must land at position j*d + i.
        let m = ndarray::array![
            [C64::new(1.0, 0.0), C64::new(2.0, 0.0)],
            [C64::new(3.0, 0.0), C64::new(4.0, 0.0)]
        ];
        let v = vectorize(&m);
        assert_eq!(v[0], C64::new(1.0, 0.0)); // (0,0)
        assert_eq!(v[1], C64::new(3.0, 0.0)); // (1,0)
        assert_eq!(v[2], C64::new(2.0, 0.0)); // (0,1)
        assert_eq!(v[3], C64::new(4.0, 0.0)); // (1,1)
        assert_eq!(unvectorize(&v), m);
    }

    #[test]
    fn kron_matches_left_right_multiplication_identities() {
        let a = ndarray::array![
            [C64::new(1.0, 2.0), C64::new(0.0, -1.0)],
            [C64::new(2.0, 0.0), C64::new(-1.0, 1.0)]
        ];
        let rho = ndarray::array![
            [C64::new(0.3, 0.0), C64::new(0.1, 0.2)],
            [C64::new(0.1, -0.2), C64::new(0.7, 0.0)]
        ];
        let eye = identity(2);

        // vec(A rho) = kron(I, A) vec(rho)
        let lhs = vectorize(&a.dot(&rho));
        let rhs = kron(&eye, &a).dot(&vectorize(&rho));
        for (x, y) in lhs.iter().zip(rhs.iter()) {
            assert!((x - y).norm() < 1e-14);
        }

        // vec(rho A) = kron(A^T, I) vec(rho)
        let lhs = vectorize(&rho.dot(&a));
        let rhs = kron(&a.t().to_owned(), &eye).dot(&vectorize(&rho));
        for (x, y) in lhs.iter().zip(rhs.iter()) {
            assert!((x - y).norm() < 1e-14);
        }
    }
}
