// SPDX-License-Identifier: Apache-2.0

//! The stationary weak-coupling generator.
//!
//! For a periodic control and stationary noise, the coarse-grained dynamics
//! is generated by a single static map built from the interaction-picture
//! Fourier coefficients `Ht_alpha(omega)` and the noise spectra. In lab time,
//!
//! ```text
//! K rho = sum_alpha sum_{omega in F} [
//!     -(i/4) Kt(omega) [[Ht_a(omega), Ht_a(omega)^+], rho]
//!     -(1/2) Jt(omega) [Ht_a(omega), [Ht_a(omega)^+, rho]]
//! ]
//! ```
//!
//! where `Jt` is the power spectrum and `Kt` its odd partner. The sum runs
//! over every retained *signed* frequency; the Hermiticity pairing
//! `Ht(-omega) = Ht(omega)^+` then makes the first line `-i ad(H_eff)` with
//! the Hermitian `H_eff = sum (Kt(omega)/4) [Ht(omega), Ht(omega)^+]`, and
//! the second line a GKLS dissipator with nonnegative rates.
//!
//! The normalization is fixed by two cross-checks built into the tests:
//! with no control (`F = {0}`) the map reduces to the exact long-time
//! commutative generator `-(Jt(0)/2) ad(H)^2` per channel, and for a
//! two-level system with transverse noise under resonant constant control
//! the population decay rate equals the golden-rule value `Jt(omega_c)/2`.

use crate::error::{Error, Result};
use crate::linalg::{
    commutator_map, dagger, hermiticity_defect, superop_compose, HermitianOperator,
    SuperOperator,
};
use crate::noise::{NoiseModel, NEGATIVE_SPECTRUM_TOL};

use super::parts::LindbladParts;
use crate::control::StationaryFourierData;

/// Assemble the stationary generator in lab time from the control's Fourier
/// data and the (shared, per-channel i.i.d.) noise model.
///
/// The result is a true GKLS generator: completely positive semigroup,
/// trace-preserving, with dissipative quadratic form `<= 0`. Use
/// [`LindbladParts::to_coarse_time`] to rescale to the slow time variable.
///
/// Errors when the channel counts disagree or when the power spectrum is
/// negative at a retained frequency (no completely positive reduction
/// exists in that case).
pub fn coarse_grained_lindbladian(
    fourier: &StationaryFourierData,
    model: &NoiseModel,
) -> Result<LindbladParts> {
    let dim = fourier.dim();
    let mut h_eff = crate::linalg::CMat::zeros((dim, dim));
    let mut dissipator = SuperOperator::zero(dim);
    for (_, term_h, term_d) in raw_frequency_contributions(fourier, model)? {
        h_eff = h_eff + term_h;
        dissipator = dissipator.add(&term_d)?;
    }
    LindbladParts::from_effective_hamiltonian(validated_hermitian(h_eff)?, dissipator)
}

/// Per-frequency contributions to the stationary generator, labeled by the
/// signed frequency they come from; summing them reproduces
/// [`coarse_grained_lindbladian`]. Each contribution is itself unital and
/// trace-preserving with a negative-semidefinite dissipative form.
pub fn coarse_grained_terms(
    fourier: &StationaryFourierData,
    model: &NoiseModel,
) -> Result<Vec<(f64, LindbladParts)>> {
    raw_frequency_contributions(fourier, model)?
        .into_iter()
        .map(|(omega, h, d)| {
            let parts =
                LindbladParts::from_effective_hamiltonian(validated_hermitian(h)?, d)?;
            Ok((omega, parts))
        })
        .collect()
}

/// Channel-summed `(omega, H_eff contribution, dissipator contribution)`
/// triples, one per retained signed frequency.
fn raw_frequency_contributions(
    fourier: &StationaryFourierData,
    model: &NoiseModel,
) -> Result<Vec<(f64, crate::linalg::CMat, SuperOperator)>> {
    if model.channels() != fourier.n_channels() {
        return Err(Error::InvalidParameter(format!(
            "noise model has {} channels but the Fourier data carries {}",
            model.channels(),
            fourier.n_channels()
        )));
    }
    let dim = fourier.dim();
    let spectrum_scale = fourier
        .frequencies()
        .iter()
        .map(|&w| model.spectral_density(w))
        .fold(1.0_f64, f64::max);

    let mut out = Vec::with_capacity(fourier.terms().len());
    for term in fourier.terms() {
        let omega = term.omega;
        let j_t = model.spectral_density(omega);
        if j_t < NEGATIVE_SPECTRUM_TOL * spectrum_scale {
            return Err(Error::InvalidNoiseModel(format!(
                "power spectrum is negative at retained frequency {omega}: {j_t:.3e}"
            )));
        }
        let k_t = model.k_tilde(omega);
        let mut h_eff = crate::linalg::CMat::zeros((dim, dim));
        let mut dissipator = SuperOperator::zero(dim);
        for coeff in &term.coeffs {
            let coeff_dag = dagger(coeff);
            // Hamiltonian piece: (Kt/4) [Ht, Ht^+] accumulates into H_eff.
            let comm = coeff.dot(&coeff_dag) - coeff_dag.dot(coeff);
            h_eff = h_eff + comm.mapv(|z| z * (0.25 * k_t));
            // Dissipative piece: -(Jt/2) ad(Ht) ad(Ht^+).
            let left = commutator_map(coeff)?;
            let right = commutator_map(&coeff_dag)?;
            let product = superop_compose(&left, &right)?;
            dissipator = dissipator.add(&product.scale(-0.5 * j_t.max(0.0)))?;
        }
        out.push((omega, h_eff, dissipator));
    }
    Ok(out)
}

fn validated_hermitian(m: crate::linalg::CMat) -> Result<HermitianOperator> {
    let defect = hermiticity_defect(&m);
    if defect > 1e-10 {
        return Err(Error::Numerical(format!(
            "accumulated effective Hamiltonian lost Hermiticity: defect {defect:.3e}"
        )));
    }
    let sym = (m.clone() + dagger(&m)).mapv(|z| 0.5 * z);
    HermitianOperator::new(sym)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::ControlSchedule;
    use crate::linalg::{ad, spin_operators};

    const TOL: f64 = 1e-9;

    /// Resonant transverse noise on a two-level system: the generator must
    /// equal `-(i/4) Kt(wc) ad(Sz) - (Jt(wc)/4) (ad(Sx)^2 + ad(Sy)^2)`.
    #[test]
    fn constant_control_transverse_noise_closed_form() {
        let [sx, sy, sz] = spin_operators(0.5).unwrap();
        let omega_c = 1.3;
        let model = NoiseModel::ou(0.7, 1.9).unwrap();
        let schedule = ControlSchedule::constant(sz.scale(omega_c), omega_c).unwrap();
        let fourier = schedule.fourier_data(&[sx.clone()], 4).unwrap();
        assert_eq!(fourier.frequencies().len(), 2);

        let parts = coarse_grained_lindbladian(&fourier, &model).unwrap();

        let k_t = model.k_tilde(omega_c);
        let j_t = model.spectral_density(omega_c);
        let expect_h = sz.scale(k_t / 4.0);
        let got_h = parts.effective_hamiltonian().unwrap();
        let dh = got_h.matrix() - expect_h.matrix();
        assert!(crate::linalg::max_abs(&dh) < TOL, "H_eff mismatch");

        let dxx = superop_compose(&ad(&sx), &ad(&sx)).unwrap();
        let dyy = superop_compose(&ad(&sy), &ad(&sy)).unwrap();
        let expect_d = dxx.add(&dyy).unwrap().scale(-j_t / 4.0);
        let diff = parts.dissipative_part().sub(&expect_d).unwrap();
        assert!(diff.frobenius_norm() < TOL, "dissipator mismatch");

        assert!(parts.unitality_defect() < TOL);
        assert!(parts.trace_preservation_defect() < TOL);
        assert!(parts.dissipative_form_max_eigenvalue().unwrap() < TOL);
    }

    /// The population decay rate out of the upper level under resonant
    /// transverse noise is the golden-rule rate `Jt(omega_c)/2`; this pins
    /// the overall normalization of the dissipator.
    #[test]
    fn golden_rule_population_decay_rate() {
        let [sx, _, sz] = spin_operators(0.5).unwrap();
        let omega_c = 0.9;
        let model = NoiseModel::ou(1.1, 0.8).unwrap();
        let schedule = ControlSchedule::constant(sz.scale(omega_c), omega_c).unwrap();
        let fourier = schedule.fourier_data(&[sx.clone()], 4).unwrap();
        let parts = coarse_grained_lindbladian(&fourier, &model).unwrap();

        // Classical resonant noise relaxes <Sz> to zero at total rate
        // 1/T1 = Jt(omega_c)/2, so starting from the excited state
        // (<Sz> = 1/2) the initial slope is -Jt/4. Evaluate the generator
        // on |0><0| and read off the Sz component of the image.
        let mut excited = crate::linalg::CMat::zeros((2, 2));
        excited[(0, 0)] = crate::linalg::C64::new(1.0, 0.0);
        let image = parts.total().apply(&excited).unwrap();
        let dz_dt = (image[(0, 0)] - image[(1, 1)]).re * 0.5;
        let expect = -model.spectral_density(omega_c) / 4.0;
        assert!(
            (dz_dt - expect).abs() < 1e-9,
            "golden-rule rate mismatch: d<Sz>/dt = {dz_dt}, expected {expect}"
        );
    }

    /// Without control the frequency set is `{0}` and the generator must be
    /// the long-time pure-dephasing map `-(Jt(0)/2) sum_alpha ad(H_alpha)^2`.
    #[test]
    fn no_control_reduces_to_zero_frequency_dephasing() {
        let [_, _, sz] = spin_operators(1.0).unwrap();
        let model = NoiseModel::ou(0.6, 2.5).unwrap();
        let schedule = ControlSchedule::none(3).unwrap();
        let fourier = schedule.fourier_data(&[sz.clone()], 1).unwrap();
        let parts = coarse_grained_lindbladian(&fourier, &model).unwrap();

        assert!(
            parts.hamiltonian_part().frobenius_norm() < TOL,
            "zero-frequency coefficients are Hermitian, so H_eff vanishes"
        );
        let dzz = superop_compose(&ad(&sz), &ad(&sz)).unwrap();
        let expect = dzz.scale(-model.spectral_density(0.0) / 2.0);
        let diff = parts.dissipative_part().sub(&expect).unwrap();
        assert!(diff.frobenius_norm() < TOL);
    }

    /// Planar (two-channel) noise under the same constant control: each
    /// channel contributes the same `Kt/4 Sz` shift — the rotating-frame
    /// phases drop out of `[Ht, Ht^+]` — so the Hamiltonian correction and
    /// the dissipator both double relative to the single-channel case.
    #[test]
    fn planar_noise_doubles_shift_and_dissipator() {
        let [sx, sy, sz] = spin_operators(0.5).unwrap();
        let omega_c = 0.7;
        let model = NoiseModel::ou(0.5, 1.0).unwrap().with_channels(2).unwrap();
        let schedule = ControlSchedule::constant(sz.scale(omega_c), omega_c).unwrap();
        let fourier = schedule
            .fourier_data(&[sx.clone(), sy.clone()], 4)
            .unwrap();
        let parts = coarse_grained_lindbladian(&fourier, &model).unwrap();

        let k_t = model.k_tilde(omega_c);
        let h_expect = sz.scale(k_t / 2.0);
        let h_diff = parts.effective_hamiltonian().unwrap().matrix() - h_expect.matrix();
        assert!(crate::linalg::frobenius_norm(&h_diff) < TOL * k_t.abs());

        let dxx = superop_compose(&ad(&sx), &ad(&sx)).unwrap();
        let dyy = superop_compose(&ad(&sy), &ad(&sy)).unwrap();
        let expect = dxx
            .add(&dyy)
            .unwrap()
            .scale(-model.spectral_density(omega_c) / 2.0);
        let diff = parts.dissipative_part().sub(&expect).unwrap();
        assert!(diff.frobenius_norm() < TOL);
    }

    /// Pulsed sign-flipping control on dephasing noise keeps only odd
    /// harmonics of the same operator, so the effective Hamiltonian must
    /// vanish and the dissipator stays proportional to `ad(Sz)^2`.
    #[test]
    fn pulsed_dephasing_generator_is_pure_sz_dissipator() {
        let [_, _, sz] = spin_operators(0.5).unwrap();
        let omega_c = 2.0;
        let model = NoiseModel::ou(1.0, 1.0).unwrap();
        let schedule = ControlSchedule::bangbang_pi(
            &spin_operators(0.5).unwrap()[0],
            omega_c,
        )
        .unwrap();
        let fourier = schedule.fourier_data(&[sz.clone()], 41).unwrap();
        let parts = coarse_grained_lindbladian(&fourier, &model).unwrap();

        assert!(parts.hamiltonian_part().frobenius_norm() < TOL);
        // All terms are multiples of ad(Sz)^2; verify proportionality by
        // projecting onto the unit direction.
        let dzz = superop_compose(&ad(&sz), &ad(&sz)).unwrap();
        let norm_sq = dzz.frobenius_norm().powi(2);
        let overlap = {
            let a = parts.dissipative_part().matrix();
            let b = dzz.matrix();
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| (x.conj() * y).re)
                .sum::<f64>()
        };
        let projected = dzz.scale(overlap / norm_sq);
        let residual = parts.dissipative_part().sub(&projected).unwrap();
        assert!(residual.frobenius_norm() < TOL);
        // The rate is negative twice the coefficient of ad(Sz)^2.
        assert!(overlap / norm_sq < 0.0);
    }

    #[test]
    fn frequency_resolved_terms_sum_to_the_full_generator() {
        let [sx, _, sz] = spin_operators(0.5).unwrap();
        let omega_c = 2.0;
        let model = NoiseModel::ou(0.7, 1.3).unwrap();
        let schedule = ControlSchedule::bangbang_pi(&sx, omega_c).unwrap();
        let fourier = schedule.fourier_data(&[sz], 21).unwrap();

        let total = coarse_grained_lindbladian(&fourier, &model).unwrap();
        let terms = coarse_grained_terms(&fourier, &model).unwrap();
        assert_eq!(terms.len(), fourier.terms().len());

        let mut summed = LindbladParts::zero(fourier.dim()).total();
        for (_, parts) in &terms {
            summed = summed.add(&parts.total()).unwrap();
        }
        let diff = summed.sub(&total.total()).unwrap();
        assert!(diff.frobenius_norm() < TOL * total.total().frobenius_norm());
    }
}
