// SPDX-License-Identifier: Apache-2.0

//! Exact generator for delta-correlated (white) noise.
//!
//! When every channel is white with cross-covariance matrix `J` (so
//! `<xi_a(t) xi_b(t')> = J_ab delta(t - t')`), averaging the random unitary
//! evolution is exact at second order and yields the time-dependent
//! Lindbladian
//!
//! ```text
//! L_t rho = -(1/2) sum_ab J_ab [H^I_a(t), [H^I_b(t), rho]]
//! ```
//!
//! with no Hamiltonian correction. Because the interaction-picture
//! operators at different times are unitarily conjugate, the generators
//! `L_t` form an isospectral family: control moves coherences between
//! decay channels but cannot change the decay spectrum.

use ndarray::Array2;

use crate::control::ControlSchedule;
use crate::error::{Error, Result};
use crate::linalg::{ad, superop_compose, HermitianOperator, SuperOperator};

use super::parts::LindbladParts;

/// Symmetry tolerance for the cross-covariance matrix.
const SYMMETRY_TOL: f64 = 1e-12;

/// Most negative admissible eigenvalue (relative to the largest) for the
/// cross-covariance matrix to count as positive semidefinite.
const PSD_TOL: f64 = -1e-10;

/// Build the exact white-noise generator at time `t`.
///
/// `j_matrix` is the real, symmetric, positive-semidefinite channel
/// cross-covariance; `ops[a]` is the bare coupling operator of channel `a`,
/// rotated into the interaction picture by `schedule` before assembly.
pub fn white_noise_generator(
    j_matrix: &Array2<f64>,
    schedule: &ControlSchedule,
    ops: &[HermitianOperator],
    t: f64,
) -> Result<LindbladParts> {
    let n = ops.len();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "at least one noise operator is required".into(),
        ));
    }
    if j_matrix.dim() != (n, n) {
        return Err(Error::Dimension(format!(
            "covariance is {}x{} but there are {n} channels",
            j_matrix.nrows(),
            j_matrix.ncols()
        )));
    }
    let scale = j_matrix.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    for i in 0..n {
        for j in 0..i {
            if (j_matrix[(i, j)] - j_matrix[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(Error::InvalidParameter(
                    "channel covariance matrix must be symmetric".into(),
                ));
            }
        }
    }
    let complex = j_matrix.mapv(|v| crate::linalg::C64::new(v, 0.0));
    let eigs = crate::linalg::hermitian_eigenvalues(&complex)?;
    if let Some(&min) = eigs.first() {
        if min < PSD_TOL * scale {
            return Err(Error::InvalidParameter(format!(
                "channel covariance matrix is not positive semidefinite \
                 (lowest eigenvalue {min:.3e})"
            )));
        }
    }

    let rotated: Vec<SuperOperator> = ops
        .iter()
        .map(|h| Ok(ad(&schedule.interaction_hamiltonian(h, t)?)))
        .collect::<Result<_>>()?;

    let mut dissipator = SuperOperator::zero(schedule.dim());
    for (a, left) in rotated.iter().enumerate() {
        for (b, right) in rotated.iter().enumerate() {
            let weight = j_matrix[(a, b)];
            if weight == 0.0 {
                continue;
            }
            let product = superop_compose(left, right)?;
            dissipator = dissipator.add(&product.scale(-0.5 * weight))?;
        }
    }
    LindbladParts::new(SuperOperator::zero(schedule.dim()), dissipator, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spin_operators;
    use ndarray::array;

    #[test]
    fn single_channel_matches_double_commutator() {
        let [sx, _, _] = spin_operators(0.5).unwrap();
        let schedule = ControlSchedule::none(2).unwrap();
        let j = array![[0.8]];
        let parts = white_noise_generator(&j, &schedule, &[sx.clone()], 0.0).unwrap();
        let expect = superop_compose(&ad(&sx), &ad(&sx)).unwrap().scale(-0.4);
        let diff = parts.dissipative_part().sub(&expect).unwrap();
        assert!(diff.frobenius_norm() < 1e-12);
        assert!(parts.hamiltonian_part().frobenius_norm() == 0.0);
        assert!(parts.dissipative_form_max_eigenvalue().unwrap() < 1e-12);
    }

    #[test]
    fn generator_family_is_isospectral_under_control() {
        let [sx, _, sz] = spin_operators(0.5).unwrap();
        let schedule = ControlSchedule::constant(sz.scale(1.1), 1.1).unwrap();
        let j = array![[0.5]];
        let reference: Vec<_> = white_noise_generator(&j, &schedule, &[sx.clone()], 0.0)
            .unwrap()
            .spectrum()
            .unwrap();
        for &t in &[0.37, 1.9, 4.21] {
            let spec = white_noise_generator(&j, &schedule, &[sx.clone()], t)
                .unwrap()
                .spectrum()
                .unwrap();
            for (a, b) in reference.iter().zip(spec.iter()) {
                assert!((a - b).norm() < 1e-9, "t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn correlated_channels_use_cross_terms() {
        let [sx, sy, _] = spin_operators(0.5).unwrap();
        let schedule = ControlSchedule::none(2).unwrap();
        // Perfectly correlated channels are equivalent to a single channel
        // coupled through Sx + Sy.
        let j = array![[1.0, 1.0], [1.0, 1.0]];
        let parts =
            white_noise_generator(&j, &schedule, &[sx.clone(), sy.clone()], 0.0).unwrap();
        let sum = sx.add(&sy).unwrap();
        let expect = superop_compose(&ad(&sum), &ad(&sum)).unwrap().scale(-0.5);
        let diff = parts.dissipative_part().sub(&expect).unwrap();
        assert!(diff.frobenius_norm() < 1e-12);
    }

    #[test]
    fn indefinite_covariance_is_rejected() {
        let [sx, sy, _] = spin_operators(0.5).unwrap();
        let schedule = ControlSchedule::none(2).unwrap();
        let j = array![[1.0, 2.0], [2.0, 1.0]];
        assert!(white_noise_generator(&j, &schedule, &[sx, sy], 0.0).is_err());
    }
}
