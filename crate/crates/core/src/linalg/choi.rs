// SPDX-License-Identifier: Apache-2.0

//! Choi matrix of a superoperator and complete-positivity tests.

use super::{faer_bridge, hermiticity_defect, CMat, SuperOperator, CP_EIG_TOL};
use crate::error::{Error, Result};

/// Choi matrix of a map `Phi`, defined as
/// `C = sum_{ij} E_ij (x) Phi(E_ij)` where `E_ij = |i><j|`.
///
/// Under the column-stacking convention this is the index reshuffle
/// `C[(i*d + k, j*d + l)] = M[(l*d + k, j*d + i)]` of the superoperator
/// matrix `M`. For a Hermiticity-preserving map the result is Hermitian;
/// a defect beyond `1e-10` is rejected. The map is completely positive iff
/// `C` is positive semidefinite.
pub fn choi_matrix(m: &SuperOperator) -> Result<CMat> {
    let d = m.dim();
    let mat = m.matrix();
    let c = CMat::from_shape_fn((d * d, d * d), |(row, col)| {
        let (i, k) = (row / d, row % d);
        let (j, l) = (col / d, col % d);
        mat[(l * d + k, j * d + i)]
    });
    let defect = hermiticity_defect(&c);
    if defect > 1e-10 {
        return Err(Error::InvalidOperator(format!(
            "Choi matrix deviates from Hermiticity by {defect:.3e}; \
             the map is not Hermiticity-preserving"
        )));
    }
    Ok(c)
}

/// Smallest eigenvalue of the Choi matrix.
pub fn min_choi_eigenvalue(m: &SuperOperator) -> Result<f64> {
    let c = choi_matrix(m)?;
    let vals = faer_bridge::self_adjoint_eigenvalues(&c)?;
    Ok(vals.first().copied().unwrap_or(0.0))
}

/// Whether the map is completely positive: the Choi matrix has no
/// eigenvalue below [`CP_EIG_TOL`].
pub fn is_completely_positive(m: &SuperOperator) -> Result<bool> {
    Ok(min_choi_eigenvalue(m)? >= CP_EIG_TOL)
}
