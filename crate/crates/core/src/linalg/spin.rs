// SPDX-License-Identifier: Apache-2.0

//! Spin operators for arbitrary half-integer or integer spin.

use super::{CMat, C64, HermitianOperator};
use crate::error::{Error, Result};

/// Spin operators `[S_x, S_y, S_z]` for spin `s` in the standard basis
/// `|s>, |s-1>, ..., |-s>` (descending magnetic quantum number), with
/// `hbar = 1`.
///
/// `s` must be a positive half-integer or integer (`2s` a positive integer
/// within 1e-9); anything else is rejected. The returned matrices satisfy
/// the angular momentum algebra `[S_x, S_y] = i S_z` (and cyclic), and
/// `S_x^2 + S_y^2 + S_z^2 = s(s+1) I`.
pub fn spin_operators(s: f64) -> Result<[HermitianOperator; 3]> {
    let two_s = 2.0 * s;
    if !(two_s.round() - two_s).abs().le(&1e-9) || two_s.round() < 1.0 || !s.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "spin must be a half-integer or integer >= 1/2, got {s}"
        )));
    }
    let two_s = two_s.round() as usize;
    let s = two_s as f64 / 2.0;
    let d = two_s + 1;

    // m_k = s - k for basis index k = 0..d.
    let mut sz = CMat::zeros((d, d));
    for k in 0..d {
        sz[(k, k)] = C64::new(s - k as f64, 0.0);
    }

    // S_+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, i.e. index k -> k-1.
    let mut sp = CMat::zeros((d, d));
    for k in 1..d {
        let m = s - k as f64;
        let amp = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
        sp[(k - 1, k)] = C64::new(amp, 0.0);
    }
    let sm = super::dagger(&sp);

    let sx = (&sp + &sm).mapv(|z| z * 0.5);
    let sy = (&sp - &sm).mapv(|z| z * C64::new(0.0, -0.5));

    Ok([
        HermitianOperator::new(sx)?,
        HermitianOperator::new(sy)?,
        HermitianOperator::new(sz)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_spin() {
        assert!(spin_operators(0.3).is_err());
        assert!(spin_operators(0.0).is_err());
        assert!(spin_operators(-0.5).is_err());
    }

    #[test]
    fn spin_half_matches_pauli_over_two() {
        let [sx, sy, sz] = spin_operators(0.5).unwrap();
        assert!((sx.matrix()[(0, 1)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((sy.matrix()[(0, 1)] - C64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((sz.matrix()[(0, 0)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((sz.matrix()[(1, 1)] - C64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn angular_momentum_algebra_holds_for_various_spins() {
        for &s in &[0.5, 1.0, 1.5, 2.0, 2.5] {
            let [sx, sy, sz] = spin_operators(s).unwrap();
            // [S_x, S_y] = i S_z
            let comm = &sx.matrix().dot(sy.matrix()) - &sy.matrix().dot(sx.matrix());
            let expect = sz.matrix().mapv(|z| z * C64::new(0.0, 1.0));
            let diff = &comm - &expect;
            assert!(super::super::max_abs(&diff) < 1e-12, "spin {s}");

            // Casimir: S^2 = s(s+1) I
            let casimir = sx.matrix().dot(sx.matrix())
                + sy.matrix().dot(sy.matrix())
                + sz.matrix().dot(sz.matrix());
            let d = sx.dim();
            for i in 0..d {
                for j in 0..d {
                    let expect = if i == j { s * (s + 1.0) } else { 0.0 };
                    assert!((casimir[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-12);
                }
            }
        }
    }
}
