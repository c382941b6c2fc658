// SPDX-License-Identifier: Apache-2.0

//! Shared types for assembled generators.
//!
//! Every regime produces a [`LindbladParts`] value: a Hamiltonian piece
//! (`i ad(H)` for a Hermitian `H`) and a dissipative piece, both stored as
//! dense super-operators so that spectra, exponentials and invariant checks
//! all go through the same linear-algebra layer.
//!
//! Generators are assembled in *lab time*: `d rho/dt = L rho` with `t`
//! measured in the same units as the noise correlation time.
//! [`LindbladParts::to_coarse_time`] is the one documented conversion to the
//! coarse time `s = eps^2 t / tau` on which averaged dynamics is O(1).

use serde::{Deserialize, Serialize};

use crate::control::ControlSchedule;
use crate::error::{Error, Result};
use crate::linalg::{
    ad, group_spectrum, max_abs, superop_spectrum, vectorize, C64, CMat, HermitianOperator,
    SuperOperator,
};
use crate::noise::NoiseModel;

/// Tolerance for declaring two interaction-picture snapshots commuting when
/// validating the commutative regime.
pub const COMMUTATIVITY_TOL: f64 = 1e-10;

/// Eigenvalue-grouping tolerance used when reporting degenerate spectra.
pub const SPECTRUM_GROUP_TOL: f64 = 1e-8;

/// The dynamical regime a generator was derived in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Delta-correlated noise; the Lindblad reduction is exact.
    White,
    /// Single noise direction commuting with itself at all times; the exact
    /// generator carries the time-dependent rate `gamma(t)`.
    Commutative,
    /// Weak coupling at finite `eps`: convolved noise operators and a
    /// renormalized Hamiltonian, valid to O(eps^2).
    FiniteEps,
    /// The stationary weak-coupling limit: one static Lindbladian built from
    /// the Fourier data of the control.
    CoarseGrained,
}

/// Inputs for generator construction: which regime, the weak-coupling
/// parameter, the noise statistics, the control and the bare noise operators.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    regime: Regime,
    eps: f64,
    model: NoiseModel,
    schedule: ControlSchedule,
    ops: Vec<HermitianOperator>,
}

impl GeneratorSpec {
    /// Validate and bundle the inputs.
    ///
    /// Regime-specific requirements:
    /// * `eps > 0` always;
    /// * `commutative` needs a single noise channel whose interaction-picture
    ///   operator commutes with itself across times (checked on samples);
    /// * every channel count must match between `model` and `ops`.
    pub fn new(
        regime: Regime,
        eps: f64,
        model: NoiseModel,
        schedule: ControlSchedule,
        ops: Vec<HermitianOperator>,
    ) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "weak-coupling parameter must be positive, got {eps}"
            )));
        }
        if ops.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one noise operator is required".into(),
            ));
        }
        if model.channels() != ops.len() {
            return Err(Error::InvalidParameter(format!(
                "noise model declares {} channels but {} operators were given",
                model.channels(),
                ops.len()
            )));
        }
        for h in &ops {
            if h.dim() != schedule.dim() {
                return Err(Error::Dimension(format!(
                    "operator dimension {} does not match control dimension {}",
                    h.dim(),
                    schedule.dim()
                )));
            }
        }
        if regime == Regime::Commutative {
            if ops.len() != 1 {
                return Err(Error::InvalidParameter(
                    "the commutative regime requires a single noise channel".into(),
                ));
            }
            check_self_commuting(&schedule, &ops[0], model.tau())?;
        }
        Ok(Self {
            regime,
            eps,
            model,
            schedule,
            ops,
        })
    }

    /// Regime tag.
    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Weak-coupling parameter.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Noise statistics shared by all channels.
    pub fn model(&self) -> &NoiseModel {
        &self.model
    }

    /// Control schedule.
    pub fn schedule(&self) -> &ControlSchedule {
        &self.schedule
    }

    /// Bare noise operators, one per channel.
    pub fn ops(&self) -> &[HermitianOperator] {
        &self.ops
    }
}

/// Check `[H^I(t), H^I(t')] = 0` on a grid of sample times covering several
/// control periods and noise correlation times.
fn check_self_commuting(
    schedule: &ControlSchedule,
    op: &HermitianOperator,
    tau: f64,
) -> Result<()> {
    let horizon = match schedule.period() {
        Some(period) => period.max(4.0 * tau),
        None => 4.0 * tau.max(1.0),
    };
    let n = 9;
    let snapshots: Vec<CMat> = (0..n)
        .map(|k| {
            schedule
                .interaction_hamiltonian(op, horizon * k as f64 / (n - 1) as f64)
                .map(HermitianOperator::into_matrix)
        })
        .collect::<Result<_>>()?;
    let scale = snapshots
        .iter()
        .map(max_abs)
        .fold(1.0_f64, f64::max)
        .powi(2);
    for (i, a) in snapshots.iter().enumerate() {
        for b in snapshots.iter().skip(i + 1) {
            let comm = a.dot(b) - b.dot(a);
            if max_abs(&comm) > COMMUTATIVITY_TOL * scale {
                return Err(Error::InvalidParameter(
                    "interaction-picture operator does not commute with itself \
                     across times; the commutative regime does not apply"
                        .into(),
                ));
            }
        }
    }
    Ok(())
}

/// A generator split into its Hamiltonian and dissipative pieces.
#[derive(Debug, Clone)]
pub struct LindbladParts {
    dim: usize,
    hamiltonian_part: SuperOperator,
    dissipative_part: SuperOperator,
    /// The Hermitian matrix `H` with `hamiltonian_part = -i ad(H)`, when the
    /// construction produces it in closed form.
    effective_hamiltonian: Option<HermitianOperator>,
}

impl LindbladParts {
    /// Assemble from explicit pieces; dimensions must agree.
    pub fn new(
        hamiltonian_part: SuperOperator,
        dissipative_part: SuperOperator,
        effective_hamiltonian: Option<HermitianOperator>,
    ) -> Result<Self> {
        if hamiltonian_part.dim() != dissipative_part.dim() {
            return Err(Error::Dimension(format!(
                "part dimensions disagree: {} vs {}",
                hamiltonian_part.dim(),
                dissipative_part.dim()
            )));
        }
        if let Some(h) = &effective_hamiltonian {
            if h.dim() != hamiltonian_part.dim() {
                return Err(Error::Dimension(
                    "effective Hamiltonian dimension does not match the parts".into(),
                ));
            }
        }
        Ok(Self {
            dim: hamiltonian_part.dim(),
            hamiltonian_part,
            dissipative_part,
            effective_hamiltonian,
        })
    }

    /// A zero generator on a `dim`-dimensional system.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            hamiltonian_part: SuperOperator::zero(dim),
            dissipative_part: SuperOperator::zero(dim),
            effective_hamiltonian: None,
        }
    }

    /// Build directly from an effective Hamiltonian and a dissipator:
    /// `hamiltonian_part = -i ad(H)`.
    pub fn from_effective_hamiltonian(
        h: HermitianOperator,
        dissipative_part: SuperOperator,
    ) -> Result<Self> {
        let ham = ad(&h).scale_complex(C64::new(0.0, -1.0));
        Self::new(ham, dissipative_part, Some(h))
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The Hamiltonian piece `rho -> -i [H, rho]` as a super-operator.
    pub fn hamiltonian_part(&self) -> &SuperOperator {
        &self.hamiltonian_part
    }

    /// The dissipative piece.
    pub fn dissipative_part(&self) -> &SuperOperator {
        &self.dissipative_part
    }

    /// The Hermitian matrix behind the Hamiltonian piece, when available.
    pub fn effective_hamiltonian(&self) -> Option<&HermitianOperator> {
        self.effective_hamiltonian.as_ref()
    }

    /// The full generator: Hamiltonian plus dissipative piece.
    pub fn total(&self) -> SuperOperator {
        self.hamiltonian_part
            .add(&self.dissipative_part)
            .expect("parts validated at construction")
    }

    /// `max_abs(L(1))`: a valid generator annihilates the identity.
    pub fn unitality_defect(&self) -> f64 {
        let identity = crate::linalg::identity(self.dim);
        let image = self
            .total()
            .apply(&identity)
            .expect("identity has matching dimension");
        max_abs(&image)
    }

    /// `max_rho |tr L(rho)|` over a matrix basis: exact trace-preservation
    /// check, equivalent to `vec(1)^T M = 0` column by column.
    pub fn trace_preservation_defect(&self) -> f64 {
        let total = self.total();
        let m = total.matrix();
        let identity = crate::linalg::identity(self.dim);
        let id_vec = vectorize(&identity);
        let mut worst = 0.0_f64;
        for col in 0..m.ncols() {
            let mut acc = C64::new(0.0, 0.0);
            for row in 0..m.nrows() {
                acc += id_vec[row].conj() * m[(row, col)];
            }
            worst = worst.max(acc.norm());
        }
        worst
    }

    /// Largest eigenvalue of the symmetrized dissipative piece: the
    /// dissipator must be negative semidefinite as a quadratic form on
    /// operators (`<X, D X> <= 0` in the Hilbert-Schmidt inner product).
    pub fn dissipative_form_max_eigenvalue(&self) -> Result<f64> {
        let m = self.dissipative_part.matrix();
        let sym = (m.t().mapv(|z| z.conj()) + m).mapv(|z| 0.5 * z);
        let eigs = crate::linalg::hermitian_eigenvalues(&sym)?;
        eigs.last().copied().ok_or_else(|| {
            Error::Numerical("empty spectrum for dissipative form".into())
        })
    }

    /// Multiply both parts by a scalar.
    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            hamiltonian_part: self.hamiltonian_part.scale(factor),
            dissipative_part: self.dissipative_part.scale(factor),
            effective_hamiltonian: self
                .effective_hamiltonian
                .as_ref()
                .map(|h| h.scale(factor)),
        }
    }

    /// Convert the lab-time generator `G` (d/dt) to the coarse-time
    /// generator `L = (tau / eps^2) G` (d/ds with `s = eps^2 t / tau`).
    pub fn to_coarse_time(&self, eps: f64, tau: f64) -> Result<Self> {
        if !(eps > 0.0) || !(tau > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coarse-time conversion needs eps, tau > 0; got eps={eps}, tau={tau}"
            )));
        }
        Ok(self.scale(tau / (eps * eps)))
    }

    /// Spectrum of the total generator, sorted by descending real part.
    pub fn spectrum(&self) -> Result<Vec<C64>> {
        superop_spectrum(&self.total())
    }

    /// Spectrum of the total generator grouped into degenerate clusters at
    /// [`SPECTRUM_GROUP_TOL`].
    pub fn grouped_spectrum(&self) -> Result<Vec<crate::linalg::SpectralCluster>> {
        Ok(group_spectrum(&self.spectrum()?, SPECTRUM_GROUP_TOL))
    }

    /// Serialize the parts with labels, spectrum and caller-provided context.
    pub fn to_json(&self, meta: &ExportMetadata) -> Result<serde_json::Value> {
        let spectrum = self.spectrum()?;
        let clusters: Vec<serde_json::Value> = group_spectrum(&spectrum, SPECTRUM_GROUP_TOL)
            .into_iter()
            .map(|c| {
                serde_json::json!({
                    "value": [c.value.re, c.value.im],
                    "multiplicity": c.multiplicity,
                })
            })
            .collect();
        Ok(serde_json::json!({
            "metadata": serde_json::to_value(meta)
                .map_err(|e| Error::Serialization(e.to_string()))?,
            "hilbert_dim": self.dim,
            "effective_hamiltonian": self
                .effective_hamiltonian
                .as_ref()
                .map(|h| h.to_json()),
            "hamiltonian_part": self.hamiltonian_part.to_json(),
            "dissipative_part": self.dissipative_part.to_json(),
            "total": self.total().to_json(),
            "spectrum": spectrum
                .iter()
                .map(|z| serde_json::json!([z.re, z.im]))
                .collect::<Vec<_>>(),
            "degenerate_clusters": clusters,
        }))
    }
}

/// Context recorded next to an exported generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExportMetadata {
    /// Regime the generator was built in.
    pub regime: Regime,
    /// Weak-coupling parameter, when meaningful for the regime.
    pub eps: Option<f64>,
    /// Dimensionless control rate `omega_c * tau`, when a control is present.
    pub omega_c_tau: Option<f64>,
    /// Short description of the noise statistics.
    pub noise: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::ControlSchedule;
    use crate::linalg::spin_operators;

    #[test]
    fn commutative_spec_rejects_rotating_noise_operators() {
        let [sx, _, sz] = spin_operators(0.5).unwrap();
        let model = NoiseModel::ou(1.0, 1.0).unwrap();
        let rotating = ControlSchedule::constant(sz.scale(1.0), 1.0).unwrap();
        let err = GeneratorSpec::new(
            Regime::Commutative,
            0.1,
            model.clone(),
            rotating,
            vec![sx.clone()],
        );
        assert!(err.is_err());

        // The same operator with no control is fine.
        let none = ControlSchedule::none(2).unwrap();
        assert!(
            GeneratorSpec::new(Regime::Commutative, 0.1, model, none, vec![sx]).is_ok()
        );
    }

    #[test]
    fn zero_generator_satisfies_invariants() {
        let parts = LindbladParts::zero(3);
        assert!(parts.unitality_defect() == 0.0);
        assert!(parts.trace_preservation_defect() == 0.0);
        assert!(parts.dissipative_form_max_eigenvalue().unwrap() <= 0.0);
    }

    #[test]
    fn coarse_time_scaling_multiplies_by_tau_over_eps_squared() {
        let [_, _, sz] = spin_operators(0.5).unwrap();
        let d = ad(&sz);
        let diss = crate::linalg::superop_compose(&d, &d).unwrap().scale(-0.5);
        let parts = LindbladParts::new(SuperOperator::zero(2), diss, None).unwrap();
        let coarse = parts.to_coarse_time(0.1, 2.0).unwrap();
        let expect = parts.dissipative_part().scale(200.0);
        let diff = coarse.dissipative_part().sub(&expect).unwrap();
        assert!(diff.frobenius_norm() < 1e-12);
    }
}
