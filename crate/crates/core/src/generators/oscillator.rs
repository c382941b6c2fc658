// SPDX-License-Identifier: Apache-2.0

//! Stationary generators for a noisy harmonic mode.
//!
//! A single bosonic mode at frequency `omega_c`, truncated to `n_fock`
//! levels, is driven by two independent noise channels. Two coupling
//! layouts are provided:
//!
//! - [`OscillatorKind::Linear`]: the channels couple to the quadratures
//!   `x = (a + a^+)/sqrt(2)` and `p = i (a^+ - a)/sqrt(2)`. In the rotating
//!   frame both quadratures oscillate at `+-omega_c`, so the stationary
//!   generator is a balanced damping/diffusion pair
//!   `-(Jt(omega_c)/2) (ad(x)^2 + ad(p)^2)` with no Hamiltonian correction
//!   on the bulk of the Fock space.
//! - [`OscillatorKind::Frequency`]: the channels couple to `x^2` and `p^2`.
//!   The squared quadratures mix a static piece (frequencies `0`) with
//!   two-photon pieces (`+-2 omega_c`), producing three physically distinct
//!   contributions: number dephasing `-Jt(0) ad(n + 1/2)^2`, a parametric
//!   two-photon dissipator at rate `Jt(2 omega_c)`, and a frequency pull
//!   `H_eff = -Kt(2 omega_c) (n + 1/2)` on the bulk.
//!
//! The frame Hamiltonian is represented as the exact diagonal
//! `omega_c (m + 1/2)` rather than the truncated matrix product
//! `(x^2 + p^2)/2`; the latter has a defective top eigenvalue that breaks
//! the integer gap structure the Fourier decomposition relies on. Coupling
//! operators, by contrast, are the truncated quadrature matrices, so all
//! closed forms quoted above hold exactly on matrix units `E_nm` away from
//! the truncation edge and tests pin them there.

use ndarray::Array2;

use crate::control::ControlSchedule;
use crate::error::{Error, Result};
use crate::linalg::{commutator_map, superop_compose, C64, CMat, HermitianOperator, SuperOperator};
use crate::noise::NoiseModel;

use super::coarse::coarse_grained_terms;
use super::parts::LindbladParts;

/// Smallest admitted Fock truncation: below this the edge artifacts reach
/// the levels the closed forms are quoted on.
pub const MIN_FOCK_DIM: usize = 8;

/// Harmonics retained when Fourier-decomposing the rotating-frame
/// couplings. Quadratures are band-limited to `|k| <= 2`, so this is
/// already exhaustive with margin.
const OSC_HARMONICS: usize = 4;

/// Relative residual above which [`OscillatorGenerators::linear_gamma_matrix`]
/// refuses to report a quadratic-form decomposition.
const GAMMA_RESIDUAL_TOL: f64 = 1e-8;

/// Coupling layout of the two noise channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OscillatorKind {
    /// Channels couple to the quadratures `x` and `p`.
    Linear,
    /// Channels couple to the squared quadratures `x^2` and `p^2`.
    Frequency,
}

/// Truncated lowering operator `a`, with `a[(m, m+1)] = sqrt(m+1)`.
pub fn ladder_lowering(n_fock: usize) -> CMat {
    let mut a = CMat::zeros((n_fock, n_fock));
    for m in 0..n_fock.saturating_sub(1) {
        a[(m, m + 1)] = C64::new(((m + 1) as f64).sqrt(), 0.0);
    }
    a
}

/// Truncated position quadrature `x = (a + a^+) / sqrt(2)`.
pub fn position_operator(n_fock: usize) -> CMat {
    let a = ladder_lowering(n_fock);
    let ad = a.t().mapv(|z| z.conj());
    (a + ad).mapv(|z| z / 2.0_f64.sqrt())
}

/// Truncated momentum quadrature `p = i (a^+ - a) / sqrt(2)`.
pub fn momentum_operator(n_fock: usize) -> CMat {
    let a = ladder_lowering(n_fock);
    let ad = a.t().mapv(|z| z.conj());
    (ad - a).mapv(|z| z * C64::new(0.0, 1.0 / 2.0_f64.sqrt()))
}

/// The stationary generator of a noisy mode, with its frequency-resolved
/// pieces kept separate for inspection.
#[derive(Clone, Debug)]
pub struct OscillatorGenerators {
    kind: OscillatorKind,
    n_fock: usize,
    omega_c: f64,
    parts: LindbladParts,
    zero_frequency_dissipator: SuperOperator,
    resonant_dissipator: SuperOperator,
    couplings: [CMat; 2],
}

/// Build the stationary generator for a noisy mode.
///
/// `model` must carry exactly two i.i.d. channels (use
/// [`NoiseModel::with_channels`]); one per quadrature. The returned bundle
/// keeps the zero-frequency and finite-frequency dissipators separate so
/// dephasing and damping/parametric rates can be read off independently;
/// their sum plus the Hamiltonian piece is [`OscillatorGenerators::parts`].
pub fn oscillator_generators(
    kind: OscillatorKind,
    n_fock: usize,
    model: &NoiseModel,
    omega_c: f64,
) -> Result<OscillatorGenerators> {
    if n_fock < MIN_FOCK_DIM {
        return Err(Error::InvalidParameter(format!(
            "n_fock must be at least {MIN_FOCK_DIM}, got {n_fock}"
        )));
    }
    if model.channels() != 2 {
        return Err(Error::InvalidParameter(format!(
            "oscillator generators need a two-channel noise model, got {} channel(s)",
            model.channels()
        )));
    }
    if !omega_c.is_finite() || omega_c <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "omega_c must be positive and finite, got {omega_c}"
        )));
    }

    // Exact diagonal frame Hamiltonian: gaps are integer multiples of
    // omega_c for every truncation, which the truncated (x^2 + p^2)/2 is
    // not (its top eigenvalue is defective).
    let mut hc = CMat::zeros((n_fock, n_fock));
    for m in 0..n_fock {
        hc[(m, m)] = C64::new(omega_c * (m as f64 + 0.5), 0.0);
    }
    let hc = HermitianOperator::new(hc)?;

    let x = position_operator(n_fock);
    let p = momentum_operator(n_fock);
    let couplings: [CMat; 2] = match kind {
        OscillatorKind::Linear => [x, p],
        OscillatorKind::Frequency => [x.dot(&x), p.dot(&p)],
    };
    let ops = [
        HermitianOperator::new(couplings[0].clone())?,
        HermitianOperator::new(couplings[1].clone())?,
    ];

    let schedule = ControlSchedule::constant(hc, omega_c)?;
    let fourier = schedule.fourier_data(&ops, OSC_HARMONICS)?;
    let terms = coarse_grained_terms(&fourier, model)?;

    let mut h_eff = CMat::zeros((n_fock, n_fock));
    let mut zero_frequency = SuperOperator::zero(n_fock);
    let mut resonant = SuperOperator::zero(n_fock);
    for (omega, term) in &terms {
        if let Some(h) = term.effective_hamiltonian() {
            h_eff = h_eff + h.matrix();
        }
        if *omega == 0.0 {
            zero_frequency = zero_frequency.add(term.dissipative_part())?;
        } else {
            resonant = resonant.add(term.dissipative_part())?;
        }
    }
    let parts = LindbladParts::from_effective_hamiltonian(
        HermitianOperator::new(h_eff)?,
        zero_frequency.add(&resonant)?,
    )?;

    Ok(OscillatorGenerators {
        kind,
        n_fock,
        omega_c,
        parts,
        zero_frequency_dissipator: zero_frequency,
        resonant_dissipator: resonant,
        couplings,
    })
}

impl OscillatorGenerators {
    /// Coupling layout this bundle was built for.
    pub fn kind(&self) -> OscillatorKind {
        self.kind
    }

    /// Fock-space truncation dimension.
    pub fn n_fock(&self) -> usize {
        self.n_fock
    }

    /// Mode frequency.
    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// The assembled generator (Hamiltonian piece plus all dissipators).
    pub fn parts(&self) -> &LindbladParts {
        &self.parts
    }

    /// The Hamiltonian piece `rho -> -i [H_eff, rho]`.
    pub fn unitary_part(&self) -> &SuperOperator {
        self.parts.hamiltonian_part()
    }

    /// Dissipator collected from the static (`omega = 0`) coupling
    /// components: number dephasing for the frequency layout, empty for
    /// the linear one.
    pub fn zero_frequency_dissipator(&self) -> &SuperOperator {
        &self.zero_frequency_dissipator
    }

    /// Dissipator collected from the rotating coupling components:
    /// quadrature damping at `+-omega_c` (linear) or the parametric
    /// two-photon dissipator at `+-2 omega_c` (frequency).
    pub fn resonant_dissipator(&self) -> &SuperOperator {
        &self.resonant_dissipator
    }

    /// The coupling matrices handed to the noise channels.
    pub fn couplings(&self) -> &[CMat; 2] {
        &self.couplings
    }

    /// Express the total dissipator as the quadratic form
    /// `-(1/2) sum_jk Gamma_jk ad(c_j) ad(c_k)` in the stored couplings
    /// `(c_1, c_2) = (x, p)` and return the symmetric rate matrix `Gamma`.
    ///
    /// For two i.i.d. channels this recovers
    /// `Gamma = diag(Jt(omega_c), Jt(omega_c))`: equal damping of both
    /// quadratures with no cross term. Only available for the linear
    /// layout; errors if the dissipator leaves the quadratic-form span
    /// (which would indicate a construction bug).
    pub fn linear_gamma_matrix(&self) -> Result<Array2<f64>> {
        if self.kind != OscillatorKind::Linear {
            return Err(Error::InvalidParameter(
                "the quadrature rate matrix is defined for the linear layout only".into(),
            ));
        }
        let ad_x = commutator_map(&self.couplings[0])?;
        let ad_p = commutator_map(&self.couplings[1])?;
        let basis = [
            superop_compose(&ad_x, &ad_x)?,
            superop_compose(&ad_p, &ad_p)?,
            superop_compose(&ad_x, &ad_p)?.add(&superop_compose(&ad_p, &ad_x)?)?,
        ];
        let target = self.parts.dissipative_part().scale(-2.0);

        let mut gram = [[0.0_f64; 3]; 3];
        let mut rhs = [0.0_f64; 3];
        for i in 0..3 {
            for j in 0..3 {
                gram[i][j] = frobenius_inner(&basis[i], &basis[j]);
            }
            rhs[i] = frobenius_inner(&basis[i], &target);
        }
        let coeffs = solve3(gram, rhs)?;

        let mut reconstructed = SuperOperator::zero(self.n_fock);
        for (c, b) in coeffs.iter().zip(basis.iter()) {
            reconstructed = reconstructed.add(&b.scale(*c))?;
        }
        let residual = target.sub(&reconstructed)?.frobenius_norm();
        if residual > GAMMA_RESIDUAL_TOL * target.frobenius_norm().max(1e-300) {
            return Err(Error::Numerical(format!(
                "dissipator leaves the quadrature quadratic-form span: \
                 relative residual {:.3e}",
                residual / target.frobenius_norm()
            )));
        }
        Ok(ndarray::arr2(&[
            [coeffs[0], coeffs[2]],
            [coeffs[2], coeffs[1]],
        ]))
    }
}

/// Real Frobenius inner product `Re <A, B>` of two maps.
fn frobenius_inner(a: &SuperOperator, b: &SuperOperator) -> f64 {
    a.matrix()
        .iter()
        .zip(b.matrix().iter())
        .map(|(x, y)| (x.conj() * y).re)
        .sum()
}

/// Solve a 3x3 linear system by Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Result<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[pivot][col].abs() < 1e-14 {
            return Err(Error::Numerical(
                "quadratic-form basis is numerically degenerate".into(),
            ));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0_f64; 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in (row + 1)..3 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Ok(x)
}
