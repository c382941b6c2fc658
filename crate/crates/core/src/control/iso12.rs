// SPDX-License-Identifier: Apache-2.0

//! The twelve-segment isotropy-preserving qubit pulse sequence.
//!
//! Dividing the period into twelve equal parts and cycling the frame
//! through `{sigma_1, sigma_2, sigma_3, I, sigma_2, sigma_3, sigma_1, I,
//! sigma_3, sigma_1, sigma_2, I}` self-averages each Pauli coupling to zero
//! while treating the three axes symmetrically: conjugation flips the sign
//! of `S_alpha` exactly when the segment unitary anticommutes with it, so
//! each axis sees a `+-1` square wave `w_alpha`, and the three waves are
//! `2 pi / 3` translates of one another.

use crate::linalg::{identity, CMat, C64};

/// Pauli matrices `sigma_1, sigma_2, sigma_3`.
fn paulis() -> [CMat; 3] {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        ndarray::array![[zero, one], [one, zero]],
        ndarray::array![[zero, -i], [i, zero]],
        ndarray::array![[one, zero], [zero, -one]],
    ]
}

/// The segment unitaries `{V_j}` of the twelve-segment sequence, in order.
pub fn iso12_segment_unitaries() -> Vec<CMat> {
    let [s1, s2, s3] = paulis();
    let eye = identity(2);
    vec![
        s1.clone(),
        s2.clone(),
        s3.clone(),
        eye.clone(),
        s2.clone(),
        s3.clone(),
        s1.clone(),
        eye.clone(),
        s3,
        s1,
        s2,
        eye,
    ]
}

/// The three `+-1` waveforms `w_alpha(j)` induced on the couplings
/// `S_alpha` by the segment sequence: `V_j S_alpha V_j^dagger =
/// w_alpha(j) S_alpha`.
///
/// `w_1` takes the values `{+1,-1,-1,+1,-1,-1,+1,+1,-1,+1,-1,+1}` and
/// `w_2`, `w_3` are its translations by `-+ 2 pi / 3` (four segments).
pub fn iso12_waveforms() -> [[f64; 12]; 3] {
    let w1 = [
        1.0, -1.0, -1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, 1.0, -1.0, 1.0,
    ];
    // w_1(t) = w_2(t + 2 pi / 3) = w_3(t - 2 pi / 3), so
    // w_2(u) = w_1(u - 2 pi / 3) (shift right by 4 segments) and
    // w_3(u) = w_1(u + 2 pi / 3) (shift left by 4 segments).
    let mut w2 = [0.0; 12];
    let mut w3 = [0.0; 12];
    for j in 0..12 {
        w2[j] = w1[(j + 12 - 4) % 12];
        w3[j] = w1[(j + 4) % 12];
    }
    [w1, w2, w3]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, max_abs, spin_operators};

    #[test]
    fn waveforms_average_to_zero() {
        for w in iso12_waveforms() {
            let mean: f64 = w.iter().sum::<f64>() / 12.0;
            assert_eq!(mean, 0.0);
        }
    }

    #[test]
    fn conjugation_signs_reproduce_the_waveforms() {
        // V_j S_alpha V_j^dagger = w_alpha(j) S_alpha for S = 1/2.
        let spins = spin_operators(0.5).unwrap();
        let unitaries = iso12_segment_unitaries();
        let waves = iso12_waveforms();
        for (alpha, s) in spins.iter().enumerate() {
            for (j, v) in unitaries.iter().enumerate() {
                let rotated = v.dot(s.matrix()).dot(&dagger(v));
                let expect = s.matrix().mapv(|z| z * waves[alpha][j]);
                assert!(
                    max_abs(&(&rotated - &expect)) < 1e-14,
                    "alpha={alpha}, segment={j}"
                );
            }
        }
    }

    #[test]
    fn translation_relation_between_waveforms() {
        let [w1, w2, w3] = iso12_waveforms();
        for j in 0..12 {
            // w_1(t) = w_2(t + 2pi/3): shifting w_2 left by 4 gives w_1.
            assert_eq!(w2[(j + 4) % 12], w1[j]);
            // w_1(t) = w_3(t - 2pi/3): shifting w_3 right by 4 gives w_1.
            assert_eq!(w3[(j + 12 - 4) % 12], w1[j]);
        }
    }
}
