// SPDX-License-Identifier: Apache-2.0

//! Control schedule kinds and interaction-picture rotation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    dagger, identity, matrix_exp, max_abs, CMat, C64, HermitianOperator,
};

/// Default harmonic truncation for Fourier data: square-wave coefficient
/// tails fall off as `1/(2n+1)^2`, and beyond the 41st harmonic they
/// contribute less than 1e-3 to rate sums.
pub const DEFAULT_N_HARMONICS: usize = 41;

/// Maximum deviation from unitarity (`max |U^dagger U - I|`) accepted for
/// piecewise segment operators.
const UNITARITY_TOL: f64 = 1e-12;

/// Schedule families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    /// No control: `V(t) = I`.
    None,
    /// Constant Hamiltonian: `V(t) = exp(-i H_c t)`.
    Constant,
    /// Two-segment echo: free evolution for half a period, then a pi pulse.
    BangbangPi,
    /// Twelve-segment isotropy-preserving pulse sequence (qubit).
    BangbangIso12,
    /// User-supplied piecewise-constant `V(t)`.
    CustomPiecewise,
}

/// One piecewise segment: a fraction of the period and the frame unitary
/// that `V(t)` holds on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    /// Fraction of the period covered by this segment (positive; all
    /// fractions sum to 1).
    pub fraction: f64,
    /// The constant unitary value of `V(t)` on the segment.
    pub unitary: CMat,
}

/// A control schedule on a `dim`-dimensional system.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    kind: ScheduleKind,
    dim: usize,
    omega_c: f64,
    hc: Option<HermitianOperator>,
    /// Eigendecomposition of `hc` (basis, eigenvalues), cached for fast
    /// interaction-picture rotation of the constant kind.
    hc_eigen: Option<(CMat, Vec<f64>)>,
    segments: Vec<Segment>,
}

impl ControlSchedule {
    /// No control.
    pub fn none(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("dimension must be positive".into()));
        }
        Ok(Self {
            kind: ScheduleKind::None,
            dim,
            omega_c: 0.0,
            hc: None,
            hc_eigen: None,
            segments: Vec::new(),
        })
    }

    /// Constant control Hamiltonian `hc` with base angular frequency
    /// `omega_c` (the periodicity unit for Fourier data; the eigenvalue
    /// gaps of `hc` must be integer multiples of it).
    pub fn constant(hc: HermitianOperator, omega_c: f64) -> Result<Self> {
        check_omega(omega_c)?;
        let dim = hc.dim();
        let eigen = hermitian_eigendecomposition(hc.matrix())?;
        Ok(Self {
            kind: ScheduleKind::Constant,
            dim,
            omega_c,
            hc: Some(hc),
            hc_eigen: Some(eigen),
            segments: Vec::new(),
        })
    }

    /// Two-segment echo ("bang-bang"): free evolution on the first half
    /// period, an instantaneous pi rotation `exp(-i pi G)` about the pulse
    /// generator `G` on the second.
    pub fn bangbang_pi(pulse_generator: &HermitianOperator, omega_c: f64) -> Result<Self> {
        check_omega(omega_c)?;
        let d = pulse_generator.dim();
        let pulse = matrix_exp(
            &pulse_generator
                .matrix()
                .mapv(|z| z * C64::new(0.0, -std::f64::consts::PI)),
        )?;
        let segments = vec![
            Segment {
                fraction: 0.5,
                unitary: identity(d),
            },
            Segment {
                fraction: 0.5,
                unitary: pulse,
            },
        ];
        Self::piecewise_with_kind(ScheduleKind::BangbangPi, segments, omega_c)
    }

    /// The twelve-segment isotropy-preserving qubit sequence
    /// `{sigma_1, sigma_2, sigma_3, I, sigma_2, sigma_3, sigma_1, I,
    /// sigma_3, sigma_1, sigma_2, I}` on equal twelfths of the period.
    pub fn bangbang_iso12(omega_c: f64) -> Result<Self> {
        check_omega(omega_c)?;
        let segments = super::iso12::iso12_segment_unitaries()
            .into_iter()
            .map(|unitary| Segment {
                fraction: 1.0 / 12.0,
                unitary,
            })
            .collect();
        Self::piecewise_with_kind(ScheduleKind::BangbangIso12, segments, omega_c)
    }

    /// A custom piecewise-constant schedule.
    pub fn custom_piecewise(segments: Vec<Segment>, omega_c: f64) -> Result<Self> {
        check_omega(omega_c)?;
        Self::piecewise_with_kind(ScheduleKind::CustomPiecewise, segments, omega_c)
    }

    fn piecewise_with_kind(
        kind: ScheduleKind,
        segments: Vec<Segment>,
        omega_c: f64,
    ) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSchedule(
                "piecewise schedule needs at least one segment".into(),
            ));
        }
        let dim = segments[0].unitary.nrows();
        let mut fraction_sum = 0.0;
        for (j, seg) in segments.iter().enumerate() {
            if seg.unitary.dim() != (dim, dim) {
                return Err(Error::InvalidSchedule(format!(
                    "segment {j} has dimension {:?}, expected {dim}x{dim}",
                    seg.unitary.dim()
                )));
            }
            if !(seg.fraction.is_finite() && seg.fraction > 0.0) {
                return Err(Error::InvalidSchedule(format!(
                    "segment {j} has non-positive fraction {}",
                    seg.fraction
                )));
            }
            let gram = dagger(&seg.unitary).dot(&seg.unitary);
            let defect = max_abs(&(&gram - &identity(dim)));
            if defect > UNITARITY_TOL {
                return Err(Error::InvalidSchedule(format!(
                    "segment {j} deviates from unitarity by {defect:.3e} \
                     (tolerance {UNITARITY_TOL:.1e})"
                )));
            }
            fraction_sum += seg.fraction;
        }
        if (fraction_sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSchedule(format!(
                "segment fractions sum to {fraction_sum}, expected 1"
            )));
        }
        Ok(Self {
            kind,
            dim,
            omega_c,
            hc: None,
            hc_eigen: None,
            segments,
        })
    }

    /// Schedule family.
    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Base angular frequency (0 for the no-control kind).
    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// Period `2 pi / omega_c`, or `None` for the no-control kind.
    pub fn period(&self) -> Option<f64> {
        match self.kind {
            ScheduleKind::None => None,
            _ => Some(2.0 * std::f64::consts::PI / self.omega_c),
        }
    }

    /// Constant control Hamiltonian, when present.
    pub fn hc(&self) -> Option<&HermitianOperator> {
        self.hc.as_ref()
    }

    /// Piecewise segments (empty for none/constant kinds).
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// The frame unitary `V(t)`.
    ///
    /// Constant kind: `exp(-i H_c t)` from the cached eigendecomposition.
    /// Piecewise kinds: the segment value at `t mod period` (half-open
    /// segments `[start, end)`).
    pub fn frame_unitary(&self, t: f64) -> CMat {
        match self.kind {
            ScheduleKind::None => identity(self.dim),
            ScheduleKind::Constant => {
                let (u, vals) = self.hc_eigen.as_ref().expect("constant kind caches eigen");
                // V = U diag(exp(-i lambda t)) U^dagger
                let mut w = u.clone();
                for (j, lam) in vals.iter().enumerate() {
                    let phase = C64::new(0.0, -lam * t).exp();
                    for i in 0..self.dim {
                        w[(i, j)] *= phase;
                    }
                }
                w.dot(&dagger(u))
            }
            _ => {
                let seg = &self.segments[self.segment_index(t)];
                seg.unitary.clone()
            }
        }
    }

    /// Index of the piecewise segment active at time `t`.
    pub(crate) fn segment_index(&self, t: f64) -> usize {
        let period = self.period().expect("piecewise schedules are periodic");
        let mut phase = (t / period).fract();
        if phase < 0.0 {
            phase += 1.0;
        }
        let mut acc = 0.0;
        for (j, seg) in self.segments.iter().enumerate() {
            acc += seg.fraction;
            if phase < acc {
                return j;
            }
        }
        self.segments.len() - 1
    }

    /// The interaction-picture coupling `H^I(t) = V(t) H V(t)^dagger`.
    ///
    /// Conjugation by a unitary preserves Hermiticity and the spectrum
    /// exactly; the constant kind uses the cached eigenbasis of `H_c`.
    pub fn interaction_hamiltonian(
        &self,
        h: &HermitianOperator,
        t: f64,
    ) -> Result<HermitianOperator> {
        if h.dim() != self.dim {
            return Err(Error::Dimension(format!(
                "coupling operator dimension {} does not match schedule dimension {}",
                h.dim(),
                self.dim
            )));
        }
        if self.kind == ScheduleKind::None {
            return Ok(h.clone());
        }
        let v = self.frame_unitary(t);
        let rotated = v.dot(h.matrix()).dot(&dagger(&v));
        // Unitary conjugation keeps Hermiticity to machine precision, but
        // round-off can leave a ~1e-16 defect; symmetrize through the
        // validating constructor.
        HermitianOperator::new(rotated)
    }
}

fn check_omega(omega_c: f64) -> Result<()> {
    if !omega_c.is_finite() || omega_c <= 0.0 {
        return Err(Error::InvalidSchedule(format!(
            "control frequency must be positive, got {omega_c}"
        )));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix via the superoperator-free
/// path: returns (unitary eigenbasis, ascending real eigenvalues).
fn hermitian_eigendecomposition(m: &CMat) -> Result<(CMat, Vec<f64>)> {
    // Reuse the general eigendecomposition and orthonormalize: for
    // Hermitian input the eigenvector matrix is unitary up to round-off
    // and column scaling, which we repair with Gram-Schmidt.
    let (u, vals) = crate::linalg::eigendecomposition_for_control(m)?;
    let n = m.nrows();
    let mut q = u;
    // Modified Gram-Schmidt, stable enough at these dimensions.
    for j in 0..n {
        for k in 0..j {
            let mut proj = C64::new(0.0, 0.0);
            for i in 0..n {
                proj += q[(i, k)].conj() * q[(i, j)];
            }
            for i in 0..n {
                let corr = proj * q[(i, k)];
                q[(i, j)] -= corr;
            }
        }
        let norm: f64 = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-14 {
            return Err(Error::Numerical(
                "degenerate eigenbasis could not be orthonormalized".into(),
            ));
        }
        for i in 0..n {
            q[(i, j)] /= C64::new(norm, 0.0);
        }
    }
    Ok((q, vals.into_iter().map(|z| z.re).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spin_operators;

    #[test]
    fn constant_control_rotates_sx_into_the_xy_plane() {
        let [sx, sy, sz] = spin_operators(0.5).unwrap();
        let omega_c = 1.3;
        let sched = ControlSchedule::constant(sz.scale(omega_c), omega_c).unwrap();
        for &t in &[0.0, 0.4, 1.1, 5.0] {
            let hi = sched.interaction_hamiltonian(&sx, t).unwrap();
            let expect = sx
                .scale((omega_c * t).cos())
                .add(&sy.scale((omega_c * t).sin()))
                .unwrap();
            let diff = hi.matrix() - expect.matrix();
            assert!(max_abs(&diff) < 1e-12, "t={t}");
        }
    }

    #[test]
    fn bangbang_pi_flips_sz_in_second_half_period() {
        let [sx, _, sz] = spin_operators(0.5).unwrap();
        let omega_c = 2.0;
        let sched = ControlSchedule::bangbang_pi(&sx, omega_c).unwrap();
        let period = sched.period().unwrap();
        // First half: identity frame.
        let hi = sched.interaction_hamiltonian(&sz, 0.1 * period).unwrap();
        assert!(max_abs(&(hi.matrix() - sz.matrix())) < 1e-12);
        // Second half: pi pulse about x conjugates S_z to -S_z.
        let hi = sched.interaction_hamiltonian(&sz, 0.7 * period).unwrap();
        assert!(max_abs(&(hi.matrix() + sz.matrix())) < 1e-12);
    }

    #[test]
    fn conjugation_preserves_spectrum() {
        let [sx, _, sz] = spin_operators(1.0).unwrap();
        let sched = ControlSchedule::constant(sz.scale(0.9), 0.9).unwrap();
        let base = sx.eigenvalues();
        for &t in &[0.3, 2.7] {
            let hi = sched.interaction_hamiltonian(&sx, t).unwrap();
            let got = hi.eigenvalues();
            for (a, b) in base.iter().zip(got.iter()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn segment_fractions_must_sum_to_one() {
        let seg = |f: f64| Segment {
            fraction: f,
            unitary: identity(2),
        };
        let err = ControlSchedule::custom_piecewise(vec![seg(0.5), seg(0.3)], 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidSchedule(_)));
    }

    #[test]
    fn non_unitary_segments_are_rejected() {
        let mut u = identity(2);
        u[(0, 0)] = C64::new(1.5, 0.0);
        let segs = vec![Segment {
            fraction: 1.0,
            unitary: u,
        }];
        let err = ControlSchedule::custom_piecewise(segs, 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidSchedule(_)));
    }
}
