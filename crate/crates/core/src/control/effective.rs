// SPDX-License-Identifier: Apache-2.0

//! Effectiveness of a control: does it echo the noise away on average?

use super::schedule::{ControlSchedule, ScheduleKind, DEFAULT_N_HARMONICS};
use crate::error::Result;
use crate::linalg::{dagger, frobenius_norm, CMat, HermitianOperator};

/// Threshold on `||Ht_alpha(0)||_F` below which a channel counts as
/// averaged away.
pub const EFFECTIVENESS_TOL: f64 = 1e-10;

/// Outcome of an effectiveness check.
#[derive(Debug, Clone)]
pub struct EffectivenessReport {
    /// True iff every channel's zero-frequency coefficient vanishes.
    pub effective: bool,
    /// `||Ht_alpha(0)||_F` per channel.
    pub zero_mode_norms: Vec<f64>,
    /// For constant controls: the norm of the block-diagonal part
    /// `sum_j P_j H_alpha P_j` over the spectral projections of `H_c`
    /// (equals the zero-frequency coefficient when the spectral gaps are
    /// non-degenerate multiples of `omega_c`).
    pub block_diagonal_residuals: Option<Vec<f64>>,
    /// For piecewise kinds: the period-weighted frame average
    /// `sum_j f_j V_j H_alpha V_j^dagger` per channel.
    pub weighted_averages: Option<Vec<CMat>>,
    /// Human-readable notes.
    pub diagnostics: Vec<String>,
}

impl ControlSchedule {
    /// Check whether this schedule self-averages every coupling operator
    /// to zero (i.e. `Ht_alpha(0) = 0` for all channels).
    pub fn is_effective(&self, ops: &[HermitianOperator]) -> Result<EffectivenessReport> {
        let data = self.fourier_data(ops, DEFAULT_N_HARMONICS)?;
        let mut zero_mode_norms = Vec::with_capacity(ops.len());
        for alpha in 0..ops.len() {
            zero_mode_norms.push(frobenius_norm(&data.zero_coefficient(alpha)));
        }
        let effective = zero_mode_norms.iter().all(|n| *n < EFFECTIVENESS_TOL);

        let mut diagnostics = Vec::new();
        let block_diagonal_residuals = match self.kind() {
            ScheduleKind::Constant => {
                let residuals = self.block_diagonal_residuals(ops);
                for (alpha, r) in residuals.iter().enumerate() {
                    diagnostics.push(format!(
                        "channel {alpha}: block-diagonal residual over H_c \
                         eigenspaces = {r:.3e}"
                    ));
                }
                Some(residuals)
            }
            _ => None,
        };
        let weighted_averages = if self.segments().is_empty() {
            None
        } else {
            let averages: Vec<CMat> = ops
                .iter()
                .map(|h| {
                    let mut acc = CMat::zeros((self.dim(), self.dim()));
                    for seg in self.segments() {
                        let rot = seg.unitary.dot(h.matrix()).dot(&dagger(&seg.unitary));
                        acc = acc + rot.mapv(|z| z * seg.fraction);
                    }
                    acc
                })
                .collect();
            for (alpha, avg) in averages.iter().enumerate() {
                diagnostics.push(format!(
                    "channel {alpha}: ||period-weighted frame average|| = {:.3e}",
                    frobenius_norm(avg)
                ));
            }
            Some(averages)
        };
        for (alpha, n) in zero_mode_norms.iter().enumerate() {
            diagnostics.push(format!("channel {alpha}: ||Ht(0)||_F = {n:.3e}"));
        }

        Ok(EffectivenessReport {
            effective,
            zero_mode_norms,
            block_diagonal_residuals,
            weighted_averages,
            diagnostics,
        })
    }

    /// `||sum_j P_j H_alpha P_j||_F` for the spectral projections `P_j` of
    /// the constant control Hamiltonian.
    fn block_diagonal_residuals(&self, ops: &[HermitianOperator]) -> Vec<f64> {
        let hc = self.hc().expect("constant kind has hc");
        let vals = hc.eigenvalues();
        // Spectral projections from the orthonormal eigenbasis: group
        // eigenvalues within a tolerance into eigenspaces.
        let (basis, raw_vals) = match crate::linalg::eigendecomposition_for_control(hc.matrix()) {
            Ok((u, v)) => (u, v.into_iter().map(|z| z.re).collect::<Vec<_>>()),
            Err(_) => return ops.iter().map(|_| f64::NAN).collect(),
        };
        let scale = vals.iter().fold(1.0f64, |a, b| a.max(b.abs()));
        let tol = 1e-9 * scale;
        ops.iter()
            .map(|h| {
                let d = self.dim();
                // <u_i| H |u_j> kept only when lambda_i ~ lambda_j.
                let hu = h.matrix().dot(&basis);
                let mut acc = CMat::zeros((d, d));
                for i in 0..d {
                    for j in 0..d {
                        if (raw_vals[i] - raw_vals[j]).abs() > tol {
                            continue;
                        }
                        // element <u_i|H|u_j> u_i u_j^dagger
                        let mut elem = crate::linalg::C64::new(0.0, 0.0);
                        for r in 0..d {
                            elem += basis[(r, i)].conj() * hu[(r, j)];
                        }
                        for r in 0..d {
                            for c in 0..d {
                                acc[(r, c)] += elem * basis[(r, i)] * basis[(c, j)].conj();
                            }
                        }
                    }
                }
                frobenius_norm(&acc)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spin_operators;

    #[test]
    fn rotating_control_echoes_transverse_noise() {
        let [sx, _, sz] = spin_operators(0.5).unwrap();
        let sched = ControlSchedule::constant(sz.scale(1.0), 1.0).unwrap();
        let report = sched.is_effective(&[sx.clone()]).unwrap();
        assert!(report.effective);
        assert!(report.zero_mode_norms[0] < 1e-12);
        let residuals = report.block_diagonal_residuals.unwrap();
        assert!(residuals[0] < 1e-12);
    }

    #[test]
    fn constant_control_cannot_echo_isotropic_qubit_noise() {
        let [sx, sy, sz] = spin_operators(0.5).unwrap();
        let sched = ControlSchedule::constant(sz.scale(1.0), 1.0).unwrap();
        let report = sched.is_effective(&[sx, sy, sz]).unwrap();
        assert!(!report.effective);
        // The S_z channel commutes with H_c and survives whole.
        assert!(report.zero_mode_norms[2] > 0.5);
    }

    #[test]
    fn iso12_echoes_every_pauli_channel() {
        let spins = spin_operators(0.5).unwrap();
        let sched = ControlSchedule::bangbang_iso12(1.0).unwrap();
        let report = sched.is_effective(&spins).unwrap();
        assert!(report.effective, "norms: {:?}", report.zero_mode_norms);
        let averages = report.weighted_averages.unwrap();
        for avg in &averages {
            assert!(frobenius_norm(avg) < 1e-14);
        }
    }
}
