// SPDX-License-Identifier: Apache-2.0

//! Fourier decomposition of the interaction picture for periodic controls.
//!
//! With `H^I(t) = sum_{omega in F} Ht(omega) e^{-i omega t}`, coefficients
//! are extracted as period averages `Ht(omega) = (1/T) integral_0^T H^I(t)
//! e^{+i omega t} dt` at the harmonics `omega = k omega_c`. Piecewise
//! schedules use exact per-segment integration; the constant kind uses
//! trapezoid quadrature over the period, which is spectrally accurate for
//! its trigonometric-polynomial integrand.

use ndarray::Array2;

use super::schedule::{ControlSchedule, ScheduleKind};
use crate::error::{Error, Result};
use crate::linalg::{dagger, frobenius_norm, CMat, C64, HermitianOperator};

/// Coefficients with Frobenius norm below this are pruned from the
/// frequency set.
pub const COEFF_PRUNE_TOL: f64 = 1e-12;

/// Maximum admissible defect in the pairing `Ht(-omega) = Ht(omega)^dagger`.
pub const PAIRING_TOL: f64 = 1e-10;

/// Trapezoid points per period used for quadrature coefficient extraction.
const QUADRATURE_POINTS: usize = 4096;

/// One harmonic: the frequency and the coefficient matrix of every channel.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTerm {
    /// Angular frequency `omega = k omega_c` (may be negative or zero).
    pub omega: f64,
    /// `coeffs[alpha]` is `Ht_alpha(omega)`.
    pub coeffs: Vec<CMat>,
}

/// The full Fourier dataset of a periodic schedule acting on a family of
/// coupling operators.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryFourierData {
    dim: usize,
    n_channels: usize,
    base_omega: f64,
    /// Terms sorted by ascending frequency; the frequency set is closed
    /// under negation.
    terms: Vec<FourierTerm>,
}

impl StationaryFourierData {
    /// Assemble a dataset from explicit terms, enforcing the structural
    /// invariants: the frequency set is closed under negation and
    /// `Ht(-omega) = Ht(omega)^dagger` within [`PAIRING_TOL`].
    pub fn from_terms(
        dim: usize,
        n_channels: usize,
        base_omega: f64,
        mut terms: Vec<FourierTerm>,
    ) -> Result<Self> {
        for term in &terms {
            if term.coeffs.len() != n_channels {
                return Err(Error::Dimension(format!(
                    "term at omega={} has {} channels, expected {n_channels}",
                    term.omega,
                    term.coeffs.len()
                )));
            }
            for c in &term.coeffs {
                if c.dim() != (dim, dim) {
                    return Err(Error::Dimension(format!(
                        "coefficient at omega={} is {}x{}, expected {dim}x{dim}",
                        term.omega,
                        c.nrows(),
                        c.ncols()
                    )));
                }
            }
        }
        terms.sort_by(|a, b| a.omega.partial_cmp(&b.omega).expect("finite frequencies"));
        let data = Self {
            dim,
            n_channels,
            base_omega,
            terms,
        };
        data.validate_pairing()?;
        Ok(data)
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of noise channels.
    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    /// Base angular frequency `omega_c` of the harmonic grid.
    pub fn base_omega(&self) -> f64 {
        self.base_omega
    }

    /// All terms, sorted by ascending frequency.
    pub fn terms(&self) -> &[FourierTerm] {
        &self.terms
    }

    /// The retained frequency set `F`.
    pub fn frequencies(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.omega).collect()
    }

    /// Coefficient `Ht_alpha(omega)`, if retained.
    pub fn coeff(&self, channel: usize, omega: f64) -> Option<&CMat> {
        let tol = self.frequency_tolerance();
        self.terms
            .iter()
            .find(|t| (t.omega - omega).abs() <= tol)
            .and_then(|t| t.coeffs.get(channel))
    }

    /// Zero-frequency coefficient of a channel (zeros if pruned).
    pub fn zero_coefficient(&self, channel: usize) -> CMat {
        self.coeff(channel, 0.0)
            .cloned()
            .unwrap_or_else(|| Array2::zeros((self.dim, self.dim)))
    }

    /// Reconstruct `H^I(t) = sum_omega Ht(omega) e^{-i omega t}` for one
    /// channel (useful for cross-checks).
    pub fn reconstruct(&self, channel: usize, t: f64) -> CMat {
        let mut acc: CMat = Array2::zeros((self.dim, self.dim));
        for term in &self.terms {
            let phase = C64::new(0.0, -term.omega * t).exp();
            acc = acc + term.coeffs[channel].mapv(|z| z * phase);
        }
        acc
    }

    /// Per-channel sum of squared coefficient norms
    /// `sum_omega ||Ht_alpha(omega)||_F^2` (the Parseval left-hand side).
    pub fn parseval_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_channels];
        for term in &self.terms {
            for (alpha, c) in term.coeffs.iter().enumerate() {
                sums[alpha] += frobenius_norm(c).powi(2);
            }
        }
        sums
    }

    fn frequency_tolerance(&self) -> f64 {
        1e-9 * self.base_omega.abs().max(1.0)
    }

    fn validate_pairing(&self) -> Result<()> {
        let tol = self.frequency_tolerance();
        for term in &self.terms {
            let partner = self
                .terms
                .iter()
                .find(|t| (t.omega + term.omega).abs() <= tol)
                .ok_or_else(|| {
                    Error::InvalidOperator(format!(
                        "frequency set is not closed under negation: no partner \
                         for omega={}",
                        term.omega
                    ))
                })?;
            for (alpha, c) in term.coeffs.iter().enumerate() {
                let defect = frobenius_norm(&(&dagger(c) - &partner.coeffs[alpha]));
                if defect > PAIRING_TOL {
                    return Err(Error::InvalidOperator(format!(
                        "Hermiticity pairing fails at omega={} channel {alpha}: \
                         ||Ht(-w) - Ht(w)^dagger|| = {defect:.3e}",
                        term.omega
                    )));
                }
            }
        }
        Ok(())
    }
}

impl ControlSchedule {
    /// Fourier dataset of the interaction picture for this schedule and
    /// the given coupling operators, truncated at `|k| <= n_harmonics`
    /// harmonics of the base frequency.
    ///
    /// The no-control kind yields the single frequency `{0}` with
    /// `Ht(0) = H_alpha`. Piecewise kinds use exact per-segment
    /// integration; the constant kind uses period trapezoid quadrature
    /// (spectrally exact here) after validating that the control
    /// Hamiltonian's spectral gaps are integer multiples of `omega_c`.
    /// Coefficients below [`COEFF_PRUNE_TOL`] are pruned.
    pub fn fourier_data(
        &self,
        ops: &[HermitianOperator],
        n_harmonics: usize,
    ) -> Result<StationaryFourierData> {
        self.check_ops(ops)?;
        if self.kind() == ScheduleKind::None {
            let terms = vec![FourierTerm {
                omega: 0.0,
                coeffs: ops.iter().map(|h| h.matrix().clone()).collect(),
            }];
            return StationaryFourierData::from_terms(self.dim(), ops.len(), 0.0, terms);
        }
        if n_harmonics == 0 {
            return Err(Error::InvalidParameter(
                "n_harmonics must be at least 1".into(),
            ));
        }
        let raw = match self.kind() {
            ScheduleKind::Constant => {
                self.validate_constant_periodicity()?;
                self.fourier_terms_quadrature(ops, n_harmonics, QUADRATURE_POINTS)?
            }
            _ => self.fourier_terms_piecewise(ops, n_harmonics)?,
        };
        let pruned = prune_terms(raw);
        StationaryFourierData::from_terms(self.dim(), ops.len(), self.omega_c(), pruned)
    }

    /// Quadrature-only coefficient extraction (trapezoid with `n_points`
    /// per period), exposed as the cross-check path for piecewise kinds.
    pub fn fourier_data_quadrature(
        &self,
        ops: &[HermitianOperator],
        n_harmonics: usize,
        n_points: usize,
    ) -> Result<StationaryFourierData> {
        self.check_ops(ops)?;
        if self.kind() == ScheduleKind::None {
            return self.fourier_data(ops, n_harmonics);
        }
        let raw = self.fourier_terms_quadrature(ops, n_harmonics, n_points)?;
        let pruned = prune_terms(raw);
        StationaryFourierData::from_terms(self.dim(), ops.len(), self.omega_c(), pruned)
    }

    fn check_ops(&self, ops: &[HermitianOperator]) -> Result<()> {
        if ops.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one coupling operator is required".into(),
            ));
        }
        for h in ops {
            if h.dim() != self.dim() {
                return Err(Error::Dimension(format!(
                    "coupling operator dimension {} does not match schedule dimension {}",
                    h.dim(),
                    self.dim()
                )));
            }
        }
        Ok(())
    }

    /// For the constant kind, `H^I(t)` is `T`-periodic iff every spectral
    /// gap of `H_c` is an integer multiple of `omega_c`.
    fn validate_constant_periodicity(&self) -> Result<()> {
        let hc = self.hc().expect("constant kind has hc");
        let vals = hc.eigenvalues();
        let w = self.omega_c();
        for (i, a) in vals.iter().enumerate() {
            for b in vals.iter().skip(i + 1) {
                let gap = (a - b).abs();
                let k = (gap / w).round();
                if (gap - k * w).abs() > 1e-9 * w.max(1.0) {
                    return Err(Error::InvalidSchedule(format!(
                        "constant control is aperiodic at base frequency {w}: \
                         spectral gap {gap} is not an integer multiple"
                    )));
                }
            }
        }
        Ok(())
    }

    fn fourier_terms_quadrature(
        &self,
        ops: &[HermitianOperator],
        n_harmonics: usize,
        n_points: usize,
    ) -> Result<Vec<FourierTerm>> {
        if n_points < 4 {
            return Err(Error::InvalidParameter(
                "quadrature needs at least 4 points per period".into(),
            ));
        }
        let period = self
            .period()
            .ok_or_else(|| Error::InvalidSchedule("schedule is aperiodic".into()))?;
        let n = n_points;
        // Sample H^I over one period once per channel.  Midpoint sampling
        // keeps the grid off the segment boundaries of piecewise schedules,
        // where a one-sided sample would cost an O(1/N) error; off the jumps
        // the rule is limited only by spectral aliasing.
        let mut samples: Vec<Vec<CMat>> = Vec::with_capacity(ops.len());
        for h in ops {
            let per_channel: Vec<CMat> = (0..n)
                .map(|m| {
                    let t = period * (m as f64 + 0.5) / n as f64;
                    self.interaction_hamiltonian(h, t)
                        .map(|hi| hi.into_matrix())
                })
                .collect::<Result<_>>()?;
            samples.push(per_channel);
        }
        let mut terms = Vec::new();
        for k in -(n_harmonics as i64)..=(n_harmonics as i64) {
            let omega = k as f64 * self.omega_c();
            let mut coeffs = Vec::with_capacity(ops.len());
            for per_channel in &samples {
                let mut acc: CMat = Array2::zeros((self.dim(), self.dim()));
                for (m, hi) in per_channel.iter().enumerate() {
                    let t = period * (m as f64 + 0.5) / n as f64;
                    let phase = C64::new(0.0, omega * t).exp();
                    acc = acc + hi.mapv(|z| z * phase);
                }
                coeffs.push(acc.mapv(|z| z / n as f64));
            }
            terms.push(FourierTerm { omega, coeffs });
        }
        Ok(terms)
    }

    /// Exact coefficients for piecewise-constant `V(t)`: on segment `j`
    /// with endpoints at cumulative fractions `[c_j, c_{j+1}]`,
    /// `(1/T) integral e^{i k omega t} dt = (e^{2 pi i k c_{j+1}} -
    /// e^{2 pi i k c_j}) / (2 pi i k)`.
    fn fourier_terms_piecewise(
        &self,
        ops: &[HermitianOperator],
        n_harmonics: usize,
    ) -> Result<Vec<FourierTerm>> {
        let segments = self.segments();
        // Rotated couplings per segment and channel.
        let mut rotated: Vec<Vec<CMat>> = Vec::with_capacity(ops.len());
        for h in ops {
            rotated.push(
                segments
                    .iter()
                    .map(|seg| seg.unitary.dot(h.matrix()).dot(&dagger(&seg.unitary)))
                    .collect(),
            );
        }
        let mut cum = Vec::with_capacity(segments.len() + 1);
        cum.push(0.0);
        for seg in segments {
            cum.push(cum.last().unwrap() + seg.fraction);
        }

        let mut terms = Vec::new();
        for k in -(n_harmonics as i64)..=(n_harmonics as i64) {
            let omega = k as f64 * self.omega_c();
            let mut coeffs = Vec::with_capacity(ops.len());
            for per_channel in &rotated {
                let mut acc: CMat = Array2::zeros((self.dim(), self.dim()));
                for (j, hj) in per_channel.iter().enumerate() {
                    let weight = if k == 0 {
                        C64::new(segments[j].fraction, 0.0)
                    } else {
                        let two_pi_k = 2.0 * std::f64::consts::PI * k as f64;
                        let e1 = C64::new(0.0, two_pi_k * cum[j + 1]).exp();
                        let e0 = C64::new(0.0, two_pi_k * cum[j]).exp();
                        (e1 - e0) / C64::new(0.0, two_pi_k)
                    };
                    acc = acc + hj.mapv(|z| z * weight);
                }
                coeffs.push(acc);
            }
            terms.push(FourierTerm { omega, coeffs });
        }
        Ok(terms)
    }
}

/// Drop frequencies whose coefficients are negligible for every channel,
/// keeping the set closed under negation.
fn prune_terms(terms: Vec<FourierTerm>) -> Vec<FourierTerm> {
    let norm_of = |t: &FourierTerm| -> f64 {
        t.coeffs
            .iter()
            .map(|c| frobenius_norm(c))
            .fold(0.0, f64::max)
    };
    let keep: Vec<bool> = terms
        .iter()
        .map(|t| {
            let self_norm = norm_of(t);
            let partner_norm = terms
                .iter()
                .find(|u| (u.omega + t.omega).abs() <= 1e-12 * t.omega.abs().max(1.0))
                .map(norm_of)
                .unwrap_or(0.0);
            self_norm.max(partner_norm) >= COEFF_PRUNE_TOL
        })
        .collect();
    terms
        .into_iter()
        .zip(keep)
        .filter_map(|(t, k)| k.then_some(t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, spin_operators};

    #[test]
    fn constant_zx_control_has_two_harmonics_with_raising_lowering_coeffs() {
        let [sx, sy, sz] = spin_operators(0.5).unwrap();
        let omega_c = 1.0;
        let sched = ControlSchedule::constant(sz.scale(omega_c), omega_c).unwrap();
        let data = sched.fourier_data(&[sx.clone()], 5).unwrap();
        let freqs = data.frequencies();
        assert_eq!(freqs.len(), 2);
        assert!((freqs[0] + omega_c).abs() < 1e-12);
        assert!((freqs[1] - omega_c).abs() < 1e-12);

        // Ht(+omega_c) = (S_x + i S_y)/2
        let expect_plus = (sx.matrix() + &sy.matrix().mapv(|z| z * C64::new(0.0, 1.0)))
            .mapv(|z| z * 0.5);
        let got = data.coeff(0, omega_c).unwrap();
        assert!(max_abs(&(got - &expect_plus)) < 1e-12);

        // Ht(-omega_c) = (S_x - i S_y)/2
        let expect_minus = (sx.matrix() - &sy.matrix().mapv(|z| z * C64::new(0.0, 1.0)))
            .mapv(|z| z * 0.5);
        let got = data.coeff(0, -omega_c).unwrap();
        assert!(max_abs(&(got - &expect_minus)) < 1e-12);
    }

    #[test]
    fn no_control_is_the_zero_frequency_only() {
        let [_, _, sz] = spin_operators(0.5).unwrap();
        let sched = ControlSchedule::none(2).unwrap();
        let data = sched.fourier_data(&[sz.clone()], 3).unwrap();
        assert_eq!(data.frequencies(), vec![0.0]);
        assert!(max_abs(&(&data.zero_coefficient(0) - sz.matrix())) < 1e-15);
    }

    #[test]
    fn bangbang_pi_square_wave_has_odd_harmonics_only() {
        let [sx, _, sz] = spin_operators(0.5).unwrap();
        let omega_c = 2.0;
        let sched = ControlSchedule::bangbang_pi(&sx, omega_c).unwrap();
        let data = sched.fourier_data(&[sz.clone()], 9).unwrap();
        for term in data.terms() {
            let k = (term.omega / omega_c).round() as i64;
            let norm = frobenius_norm(&term.coeffs[0]);
            assert!(k % 2 != 0, "even harmonic {k} retained with norm {norm}");
            // |c_k| = 2/(pi |k|) for the +-1 square wave; coefficient is
            // c_k * S_z with ||S_z||_F = 1/sqrt(2) * ... = sqrt(1/2).
            let expect = 2.0 / (std::f64::consts::PI * k.unsigned_abs() as f64)
                * frobenius_norm(sz.matrix());
            assert!(
                (norm - expect).abs() < 1e-12,
                "harmonic {k}: {norm} vs {expect}"
            );
        }
    }

    #[test]
    fn piecewise_closed_form_matches_quadrature() {
        let [sx, _, sz] = spin_operators(0.5).unwrap();
        let sched = ControlSchedule::bangbang_pi(&sx, 1.5).unwrap();
        let exact = sched.fourier_data(&[sz.clone()], 7).unwrap();
        let quad = sched
            .fourier_data_quadrature(&[sz.clone()], 7, 1 << 14)
            .unwrap();
        for term in exact.terms() {
            let other = quad.coeff(0, term.omega).expect("frequency retained");
            // Midpoint sampling never lands on the jumps, so the error is
            // pure aliasing of the 1/k harmonic tail: O(k/N^2).
            assert!(
                max_abs(&(&term.coeffs[0] - other)) < 1e-6,
                "omega={}",
                term.omega
            );
        }
    }

    #[test]
    fn parseval_holds_for_smooth_and_square_wave_schedules() {
        let [sx, _, sz] = spin_operators(0.5).unwrap();

        // Constant control: exact with 2 harmonics.
        let sched = ControlSchedule::constant(sz.scale(1.0), 1.0).unwrap();
        let data = sched.fourier_data(&[sx.clone()], 5).unwrap();
        let lhs = data.parseval_sums()[0];
        // Period-average of ||H^I||_F^2 = ||S_x||_F^2 = 1/2.
        let rhs = 0.5;
        assert!((lhs - rhs).abs() / rhs < 1e-6);

        // Square wave truncated at 41 harmonics: tail ~ (8/pi^2) sum_{n>20}
        // (2n+1)^{-2} of the weight, tolerance 1e-2.
        let sched = ControlSchedule::bangbang_pi(&sx, 1.0).unwrap();
        let data = sched
            .fourier_data(&[sz.clone()], DEFAULT_N_HARMONICS_FOR_TEST)
            .unwrap();
        let lhs = data.parseval_sums()[0];
        let rhs = 0.5; // w(t)^2 = 1, so average ||w S_z||_F^2 = ||S_z||_F^2
        assert!((lhs - rhs).abs() / rhs < 1e-2);
        // And the defect shrinks as the truncation grows.
        let data_more = sched.fourier_data(&[sz.clone()], 161).unwrap();
        let lhs_more = data_more.parseval_sums()[0];
        assert!((lhs_more - rhs).abs() < (lhs - rhs).abs());
    }

    const DEFAULT_N_HARMONICS_FOR_TEST: usize = super::super::DEFAULT_N_HARMONICS;
}
