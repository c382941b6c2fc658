// SPDX-License-Identifier: Apache-2.0

//! Finite-coupling generator with convolved noise operators.
//!
//! At finite weak-coupling parameter the averaged dynamics is generated, to
//! second order, by a *time-dependent* family that is GKLS at every instant
//! (so every propagation step is completely positive):
//!
//! ```text
//! L_t rho = -i [H_eff(t), rho] - (1/2) sum_a [D_a(t), [D_a(t), rho]]
//!
//! D_a(t)    = integral j(w) H^I_a(t + w) dw
//! H_eff(t)  = (i/4) sum_a integral integral j(u) j(v) sgn(v - u)
//!                  [H^I_a(t + u), H^I_a(t + v)] du dv
//! ```
//!
//! where `j` is the convolution square root of the correlation (`j * j = J`,
//! `jt = sqrt(Jt)`). Averaging `L_t` over one control period recovers the
//! stationary coarse-grained generator exactly: the dissipator average picks
//! the diagonal frequency pairs with weight `jt(omega)^2 = Jt(omega)`, and
//! the Hamiltonian average yields `sum (Kt(omega)/4) [Ht(omega), Ht(omega)^+]`.
//!
//! Two equivalent constructions are provided:
//!
//! - [`finite_eps_generator`]: direct quadrature of the convolution on the
//!   kernel grid, valid for any schedule;
//! - [`StationaryFiniteEps`]: a precomputed frequency-domain form for
//!   periodic schedules, built from the half-line transforms
//!   `G(w, w') = integral_0^inf dw R(w, w+w') (e^{-i w t} - e^{-i w' t})`
//!   of the kernel autocorrelation, much faster when many times are needed.

use ndarray::Array2;
use std::collections::BTreeMap;

use crate::control::StationaryFourierData;
use crate::error::{Error, Result};
use crate::linalg::{
    ad, dagger, hermiticity_defect, max_abs, superop_compose, C64, CMat, HermitianOperator,
    SuperOperator,
};
use crate::noise::{KernelGridSpec, NoiseModel};

use super::parts::{GeneratorSpec, LindbladParts, Regime};

/// Tolerance (relative to the operator scale) for the Hermiticity of the
/// assembled convolved operators; violations indicate a quadrature bug, not
/// user error, hence the hard failure.
const ASSEMBLY_HERMITICITY_TOL: f64 = 1e-8;

/// Build the finite-coupling generator at lab time `t` on the default
/// kernel grid.
pub fn finite_eps_generator(spec: &GeneratorSpec, t: f64) -> Result<LindbladParts> {
    finite_eps_generator_with_grid(spec, t, KernelGridSpec::default())
}

/// Build the finite-coupling generator at lab time `t`, tabulating the
/// convolution kernel on an explicit grid.
///
/// The schedule must be evaluable over `[t - L, t + L]` for the grid
/// half-width `L`; all built-in schedules are defined on the whole line.
pub fn finite_eps_generator_with_grid(
    spec: &GeneratorSpec,
    t: f64,
    grid: KernelGridSpec,
) -> Result<LindbladParts> {
    if spec.regime() != Regime::FiniteEps {
        return Err(Error::InvalidParameter(format!(
            "finite_eps_generator requires the finite-eps regime, got {:?}",
            spec.regime()
        )));
    }
    let kernel = spec.model().factor_kernel(grid)?;
    let times = kernel.times();
    let values = kernel.values();
    let dt = kernel.dt();
    let dim = spec.schedule().dim();

    let mut dissipator = SuperOperator::zero(dim);
    let mut h_eff: CMat = Array2::zeros((dim, dim));

    for op in spec.ops() {
        // Channel snapshots H^I(t + u_m) over the kernel window.
        let snapshots: Vec<CMat> = times
            .iter()
            .map(|&u| {
                spec.schedule()
                    .interaction_hamiltonian(op, t + u)
                    .map(HermitianOperator::into_matrix)
            })
            .collect::<Result<_>>()?;

        // Single pass builds both the convolved operator
        //   D = sum_m (j_m dt) S_m
        // and the ordered double sum
        //   C = sum_{m>l} (j_m dt)(j_l dt) [S_m, S_l]
        // via prefix accumulation, so the cost stays linear in grid size.
        let mut d_op: CMat = Array2::zeros((dim, dim));
        let mut prefix: CMat = Array2::zeros((dim, dim));
        let mut comm_sum: CMat = Array2::zeros((dim, dim));
        for (m, s_m) in snapshots.iter().enumerate() {
            let w_m = values[m] * dt;
            if w_m != 0.0 {
                if m > 0 {
                    let sp = s_m.dot(&prefix) - prefix.dot(s_m);
                    comm_sum = comm_sum + sp.mapv(|z| z * w_m);
                }
                d_op = d_op + s_m.mapv(|z| z * w_m);
                prefix = prefix + s_m.mapv(|z| z * w_m);
            }
        }

        let d_herm = validated_hermitian(d_op, "convolved noise operator")?;
        let d_ad = ad(&d_herm);
        dissipator = dissipator.add(&superop_compose(&d_ad, &d_ad)?.scale(-0.5))?;

        // H_eff = -(i/2) C per channel (C is anti-Hermitian, so this is
        // Hermitian by construction up to round-off).
        h_eff = h_eff + comm_sum.mapv(|z| z * C64::new(0.0, -0.5));
    }

    let h_eff = validated_hermitian(h_eff, "renormalized Hamiltonian")?;
    LindbladParts::from_effective_hamiltonian(h_eff, dissipator)
}

/// Average the finite-coupling generator over one control period by
/// midpoint sampling (`n_samples` instants). For aperiodic schedules the
/// generator is time-independent and is returned directly.
pub fn average_finite_eps_over_period(
    spec: &GeneratorSpec,
    n_samples: usize,
    grid: KernelGridSpec,
) -> Result<LindbladParts> {
    let Some(period) = spec.schedule().period() else {
        return finite_eps_generator_with_grid(spec, 0.0, grid);
    };
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "period averaging needs at least one sample".into(),
        ));
    }
    let samples: Vec<LindbladParts> = (0..n_samples)
        .map(|m| {
            let t = period * (m as f64 + 0.5) / n_samples as f64;
            finite_eps_generator_with_grid(spec, t, grid)
        })
        .collect::<Result<_>>()?;
    average_parts(&samples)
}

/// Mean of a family of generator parts (used by the period averages).
fn average_parts(samples: &[LindbladParts]) -> Result<LindbladParts> {
    let n = samples.len() as f64;
    let dim = samples[0].dim();
    let mut ham = SuperOperator::zero(dim);
    let mut diss = SuperOperator::zero(dim);
    let mut h_eff: Option<CMat> = samples[0]
        .effective_hamiltonian()
        .map(|_| Array2::zeros((dim, dim)));
    for parts in samples {
        ham = ham.add(parts.hamiltonian_part())?;
        diss = diss.add(parts.dissipative_part())?;
        if let (Some(acc), Some(h)) = (h_eff.as_mut(), parts.effective_hamiltonian()) {
            *acc = acc.clone() + h.matrix();
        } else {
            h_eff = None;
        }
    }
    let h_eff = match h_eff {
        Some(acc) => Some(HermitianOperator::new(acc.mapv(|z| z / n))?),
        None => None,
    };
    LindbladParts::new(ham.scale(1.0 / n), diss.scale(1.0 / n), h_eff)
}

fn validated_hermitian(m: CMat, label: &str) -> Result<HermitianOperator> {
    let scale = max_abs(&m).max(1.0);
    let defect = hermiticity_defect(&m);
    if defect > ASSEMBLY_HERMITICITY_TOL * scale {
        return Err(Error::Numerical(format!(
            "{label} lost Hermiticity during assembly: defect {defect:.3e}"
        )));
    }
    let sym = (m.clone() + dagger(&m)).mapv(|z| 0.5 * z);
    HermitianOperator::new(sym)
}

/// Frequency-domain form of the finite-coupling generator for periodic
/// schedules.
///
/// Precomputes, once per (schedule, model, grid):
///
/// - the kernel transform `jh(omega) = dt sum_m j(u_m) e^{-i omega u_m}`
///   on the same quadrature grid the direct path integrates over, giving
///   the convolved operator
///   `D_a(t) = sum_omega jh(omega) Ht_a(omega) e^{-i omega t}`
///   (`jh(-omega) = conj jh(omega)` keeps `D_a` Hermitian, and
///   `jh(omega) -> jt(omega) = sqrt(Jt(omega))` as the grid refines);
/// - the pair transforms `G(omega, omega')` that assemble the renormalized
///   Hamiltonian
///   `H_eff(t) = -(i/2) sum_a sum_{omega < omega'} G [Ht_a(omega), Ht_a(omega')] e^{-i (omega+omega') t}`.
///
/// `G(omega, -omega) = i Kt(omega)`, so the period average of `H_eff`
/// reproduces the stationary Hamiltonian correction exactly.
#[derive(Debug, Clone)]
pub struct StationaryFiniteEps {
    fourier: StationaryFourierData,
    j_hat: Vec<C64>,
    g: Array2<C64>,
}

impl StationaryFiniteEps {
    /// Precompute the frequency-domain data on the given kernel grid.
    pub fn new(
        fourier: &StationaryFourierData,
        model: &NoiseModel,
        grid: KernelGridSpec,
    ) -> Result<Self> {
        if model.channels() != fourier.n_channels() {
            return Err(Error::InvalidParameter(format!(
                "noise model has {} channels but the Fourier data carries {}",
                model.channels(),
                fourier.n_channels()
            )));
        }
        let kernel = model.factor_kernel(grid)?;
        let times = kernel.times();
        let values = kernel.values();
        let dt = kernel.dt();
        let freqs = fourier.frequencies();
        // Discrete transform on the very grid the direct path sums over, so
        // the two constructions agree to round-off rather than to the grid's
        // truncation error.
        let j_hat: Vec<C64> = freqs
            .iter()
            .map(|&w| {
                let mut acc = C64::new(0.0, 0.0);
                for (m, &u) in times.iter().enumerate() {
                    if values[m] != 0.0 {
                        acc += C64::new(0.0, -w * u).exp() * values[m];
                    }
                }
                acc * dt
            })
            .collect();

        let nf = freqs.len();
        let base = fourier.base_omega();
        let mut g = Array2::<C64>::zeros((nf, nf));

        // Group the strictly upper-triangular pairs by their frequency sum:
        // the inner O(n^2) kernel autocorrelation is shared within a group.
        let mut groups: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
        for i in 0..nf {
            for j in (i + 1)..nf {
                let mu = freqs[i] + freqs[j];
                let key = if base > 0.0 {
                    (mu / base).round() as i64
                } else {
                    0
                };
                groups.entry(key).or_default().push((i, j));
            }
        }

        let n = values.len();
        for (key, pairs) in groups {
            let mu = if base > 0.0 { key as f64 * base } else { 0.0 };
            let phase_mu: Vec<C64> = times
                .iter()
                .map(|&u| C64::new(0.0, -mu * u).exp())
                .collect();
            // r[k] = dt sum_l j_{l+k} j_l e^{-i mu u_l} — the lag-k
            // autocorrelation of the kernel against the pair phase.
            let mut r = vec![C64::new(0.0, 0.0); n];
            for (k, slot) in r.iter_mut().enumerate().skip(1) {
                let mut acc = C64::new(0.0, 0.0);
                for l in 0..(n - k) {
                    let w = values[l + k] * values[l];
                    if w != 0.0 {
                        acc += phase_mu[l] * w;
                    }
                }
                *slot = acc * dt;
            }
            for (i, j) in pairs {
                let (wi, wj) = (freqs[i], freqs[j]);
                let mut acc = C64::new(0.0, 0.0);
                for (k, rk) in r.iter().enumerate().skip(1) {
                    let w = k as f64 * dt;
                    let e_i = C64::new(0.0, -wi * w).exp();
                    let e_j = C64::new(0.0, -wj * w).exp();
                    acc += rk * (e_i - e_j);
                }
                let gij = acc * dt;
                g[(i, j)] = gij;
                g[(j, i)] = -gij;
            }
        }

        Ok(Self {
            fourier: fourier.clone(),
            j_hat,
            g,
        })
    }

    /// The Fourier data the transform was built on.
    pub fn fourier(&self) -> &StationaryFourierData {
        &self.fourier
    }

    /// Kernel grid transform `jh(omega)` per retained frequency.
    pub fn j_hat(&self) -> &[C64] {
        &self.j_hat
    }

    /// Pair transform `G(omega_i, omega_j)` (antisymmetric).
    pub fn g_matrix(&self) -> &Array2<C64> {
        &self.g
    }

    /// Assemble the generator at lab time `t`.
    pub fn parts(&self, t: f64) -> Result<LindbladParts> {
        let dim = self.fourier.dim();
        let terms = self.fourier.terms();
        let nf = terms.len();
        let g_scale = self.g.iter().fold(0.0_f64, |m, z| m.max(z.norm()));

        let mut dissipator = SuperOperator::zero(dim);
        let mut h_eff: CMat = Array2::zeros((dim, dim));
        for alpha in 0..self.fourier.n_channels() {
            let mut d_op: CMat = Array2::zeros((dim, dim));
            for (idx, term) in terms.iter().enumerate() {
                let weight = self.j_hat[idx];
                let phase = C64::new(0.0, -term.omega * t).exp();
                d_op = d_op + term.coeffs[alpha].mapv(|z| z * phase * weight);
            }
            let d_herm = validated_hermitian(d_op, "convolved noise operator")?;
            let d_ad = ad(&d_herm);
            dissipator = dissipator.add(&superop_compose(&d_ad, &d_ad)?.scale(-0.5))?;

            for i in 0..nf {
                for j in (i + 1)..nf {
                    let gij = self.g[(i, j)];
                    if gij.norm() <= 1e-15 * g_scale {
                        continue;
                    }
                    let a = &terms[i].coeffs[alpha];
                    let b = &terms[j].coeffs[alpha];
                    let comm = a.dot(b) - b.dot(a);
                    let mu = terms[i].omega + terms[j].omega;
                    let factor = C64::new(0.0, -0.5) * gij * C64::new(0.0, -mu * t).exp();
                    h_eff = h_eff + comm.mapv(|z| z * factor);
                }
            }
        }
        let h_eff = validated_hermitian(h_eff, "renormalized Hamiltonian")?;
        LindbladParts::from_effective_hamiltonian(h_eff, dissipator)
    }

    /// Average the generator over one period by midpoint sampling.
    ///
    /// `n_samples` must exceed twice the highest retained harmonic index so
    /// that no oscillating term aliases onto the mean. For an aperiodic
    /// frequency set (`base_omega = 0`) the generator is time-independent.
    pub fn average_over_period(&self, n_samples: usize) -> Result<LindbladParts> {
        let base = self.fourier.base_omega();
        if base == 0.0 {
            return self.parts(0.0);
        }
        let k_max = self
            .fourier
            .frequencies()
            .iter()
            .map(|w| (w / base).round().abs() as usize)
            .max()
            .unwrap_or(0);
        if n_samples <= 2 * k_max {
            return Err(Error::InvalidParameter(format!(
                "period average needs more than {} samples to avoid aliasing \
                 the highest harmonic pair, got {n_samples}",
                2 * k_max
            )));
        }
        let period = 2.0 * std::f64::consts::PI / base;
        let samples: Vec<LindbladParts> = (0..n_samples)
            .map(|m| self.parts(period * (m as f64 + 0.5) / n_samples as f64))
            .collect::<Result<_>>()?;
        average_parts(&samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::ControlSchedule;
    use crate::generators::coarse::coarse_grained_lindbladian;
    use crate::generators::white::white_noise_generator;
    use crate::linalg::{is_completely_positive, spin_operators};

    fn transverse_spec(model: NoiseModel, omega_c: f64) -> GeneratorSpec {
        let [sx, _, sz] = spin_operators(0.5).unwrap();
        let schedule = ControlSchedule::constant(sz.scale(omega_c), omega_c).unwrap();
        GeneratorSpec::new(Regime::FiniteEps, 0.1, model, schedule, vec![sx]).unwrap()
    }

    /// The frequency-domain fast path is an exact rearrangement of the
    /// kernel-grid quadrature whenever the Fourier reconstruction of the
    /// interaction picture is exact (true for constant control on a spin).
    #[test]
    fn fast_path_matches_direct_quadrature() {
        let omega_c = 1.1;
        let model = NoiseModel::ou(0.8, 1.3).unwrap();
        let spec = transverse_spec(model.clone(), omega_c);
        let grid = KernelGridSpec {
            half_width: None,
            n_points: 512,
        };

        let fourier = spec.schedule().fourier_data(spec.ops(), 4).unwrap();
        let fast = StationaryFiniteEps::new(&fourier, &model, grid).unwrap();

        for &t in &[0.0, 0.4, 2.9] {
            let direct = finite_eps_generator_with_grid(&spec, t, grid).unwrap();
            let freq = fast.parts(t).unwrap();
            let diff = direct.total().sub(&freq.total()).unwrap();
            let scale = direct.total().frobenius_norm().max(1e-30);
            assert!(
                diff.frobenius_norm() < 1e-9 * scale,
                "t={t}: relative deviation {}",
                diff.frobenius_norm() / scale
            );
        }
    }

    /// For a white model the kernel is a point mass, the renormalized
    /// Hamiltonian vanishes, and the generator reduces to the exact
    /// instantaneous white-noise generator.
    #[test]
    fn white_kernel_reduces_to_white_generator() {
        let omega_c = 0.9;
        let strength = 0.6;
        let model = NoiseModel::white(strength).unwrap();
        let spec = transverse_spec(model, omega_c);
        let t = 0.7;
        let parts = finite_eps_generator(&spec, t).unwrap();

        assert!(parts.hamiltonian_part().frobenius_norm() < 1e-12);
        let j = ndarray::array![[strength]];
        let white = white_noise_generator(&j, spec.schedule(), spec.ops(), t).unwrap();
        let diff = parts
            .dissipative_part()
            .sub(white.dissipative_part())
            .unwrap();
        assert!(diff.frobenius_norm() < 1e-10);
    }

    /// The period average of the finite-coupling family converges to the
    /// stationary coarse-grained generator (kernel-grid accuracy).
    #[test]
    fn period_average_approaches_coarse_generator() {
        let omega_c = 1.3;
        let model = NoiseModel::ou(0.6, 1.0).unwrap();
        let spec = transverse_spec(model.clone(), omega_c);
        let fourier = spec.schedule().fourier_data(spec.ops(), 4).unwrap();

        let grid = KernelGridSpec {
            half_width: None,
            n_points: 2048,
        };
        let fast = StationaryFiniteEps::new(&fourier, &model, grid).unwrap();
        let averaged = fast.average_over_period(16).unwrap();
        let coarse = coarse_grained_lindbladian(&fourier, &model).unwrap();

        let scale = coarse.total().frobenius_norm();
        let diff = averaged.total().sub(&coarse.total()).unwrap();
        assert!(
            diff.frobenius_norm() < 1e-2 * scale,
            "relative deviation {}",
            diff.frobenius_norm() / scale
        );

        // The Hamiltonian average alone must also match the stationary
        // Hamiltonian correction.
        let dh = averaged
            .hamiltonian_part()
            .sub(coarse.hamiltonian_part())
            .unwrap();
        let h_scale = coarse.hamiltonian_part().frobenius_norm();
        assert!(dh.frobenius_norm() < 2e-2 * h_scale);
    }

    /// Every instant of the family is GKLS: the dissipative form is
    /// negative semidefinite and a finite propagation step is completely
    /// positive.
    #[test]
    fn each_instant_generates_a_completely_positive_step() {
        let [sx, _, sz] = spin_operators(0.5).unwrap();
        let model = NoiseModel::ou(0.9, 0.8).unwrap();
        let schedule = ControlSchedule::bangbang_pi(&sx, 2.1).unwrap();
        let spec = GeneratorSpec::new(
            Regime::FiniteEps,
            0.2,
            model,
            schedule,
            vec![sz],
        )
        .unwrap();
        let grid = KernelGridSpec {
            half_width: None,
            n_points: 512,
        };
        for &t in &[0.0, 0.51, 1.77] {
            let parts = finite_eps_generator_with_grid(&spec, t, grid).unwrap();
            assert!(parts.dissipative_form_max_eigenvalue().unwrap() < 1e-9);
            assert!(parts.unitality_defect() < 1e-9);
            let step = parts.total().scale(0.3).exp().unwrap();
            assert!(is_completely_positive(&step).unwrap());
        }
    }
}
