// SPDX-License-Identifier: Apache-2.0

//! Single stochastic trajectories on the fine lab-time grid.
//!
//! One realization of the classical noise drives the frame Hamiltonian
//! `H_xi(t) = sum_a xi_a(t) H^I_a(t)`. The propagator is accumulated with
//! the exponential midpoint rule,
//!
//! ```text
//! U_{k+1} = exp(-i H_xi(t_k + dt/2) dt) U_k,
//! ```
//!
//! holding the noise at its step value `xi_a[k]` and rotating the coupling
//! to the step midpoint. Every step factor is exactly unitary (closed form
//! for qubits, Padé exponential of an anti-Hermitian matrix otherwise), so
//! trace and purity are conserved by construction; the accumulated product
//! is still monitored and polar-projected back onto the unitary group every
//! [`REUNITARIZE_EVERY`] steps to stop round-off from compounding.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::linalg::{dagger, identity, matrix_exp, max_abs, C64, CMat, HermitianOperator};
use crate::rng::derive_stream_seed;

use super::config::SimConfig;

/// Hard cap on the unitarity defect `max|U^+ U - 1|` of the accumulated
/// propagator, checked at every re-orthonormalization point. Exceeding it
/// indicates an integrator bug or a pathological Hamiltonian, so it is a
/// hard error rather than a warning.
pub const UNITARITY_DRIFT_TOL: f64 = 1e-9;

/// Steps between polar re-orthonormalizations of the propagator.
const REUNITARIZE_EVERY: usize = 1000;

/// Saved states and diagnostics of one noise realization.
#[derive(Debug, Clone)]
pub struct TrajectoryPath {
    times_t: Vec<f64>,
    times_s: Vec<f64>,
    states: Vec<CMat>,
    max_unitarity_defect: f64,
}

impl TrajectoryPath {
    /// Lab times of the saved states, starting at `t = 0`.
    pub fn times_t(&self) -> &[f64] {
        &self.times_t
    }

    /// Coarse times of the saved states.
    pub fn times_s(&self) -> &[f64] {
        &self.times_s
    }

    /// Density matrix at each save instant (index-aligned with the times).
    pub fn states(&self) -> &[CMat] {
        &self.states
    }

    /// Largest propagator unitarity defect observed at any checkpoint.
    pub fn max_unitarity_defect(&self) -> f64 {
        self.max_unitarity_defect
    }
}

/// Frame-rotated coupling operators at the step midpoints.
///
/// These depend only on the schedule and the grid — not on the noise — so
/// an ensemble computes them once and shares them across trajectories.
pub(crate) struct StepOperators {
    /// `mids[k][alpha] = H^I_alpha(t_k + dt/2)`.
    mids: Vec<Vec<CMat>>,
}

impl StepOperators {
    pub(crate) fn new(config: &SimConfig) -> Result<Self> {
        let dt = config.dt();
        let mids = (0..config.n_steps())
            .map(|k| {
                let t_mid = (k as f64 + 0.5) * dt;
                config
                    .ops()
                    .iter()
                    .map(|op| {
                        config
                            .schedule()
                            .interaction_hamiltonian(op, t_mid)
                            .map(HermitianOperator::into_matrix)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { mids })
    }
}

/// Integrate the noise realization with index `traj_index`.
///
/// The realization's seed is derived from `(config.seed(), traj_index)`, so
/// trajectories are reproducible individually and independent of execution
/// order. States are saved on the configured grid; the initial state is the
/// first entry.
pub fn run_trajectory(config: &SimConfig, traj_index: u64) -> Result<TrajectoryPath> {
    let mids = StepOperators::new(config)?;
    run_trajectory_with(config, &mids, traj_index)
}

/// [`run_trajectory`] against precomputed step operators.
pub(crate) fn run_trajectory_with(
    config: &SimConfig,
    mids: &StepOperators,
    traj_index: u64,
) -> Result<TrajectoryPath> {
    let dim = config.schedule().dim();
    let dt = config.dt();
    let n_steps = config.n_steps();
    let save_every = config.save_every();
    let seed = derive_stream_seed(config.seed(), traj_index);
    let sample = config.model().sample(dt, n_steps, seed)?;

    let rho0 = config.rho0().matrix().clone();
    let mut u = identity(dim);
    let mut states = Vec::with_capacity(n_steps / save_every + 1);
    states.push(rho0.clone());
    let mut max_defect = 0.0_f64;

    for k in 0..n_steps {
        let mut h: CMat = Array2::zeros((dim, dim));
        for (alpha, mid) in mids.mids[k].iter().enumerate() {
            let xi = sample.values[alpha][k];
            if xi != 0.0 {
                h = h + mid.mapv(|z| z * xi);
            }
        }
        u = step_unitary(&h, dt)?.dot(&u);

        if (k + 1) % REUNITARIZE_EVERY == 0 || k + 1 == n_steps {
            let defect = unitarity_defect(&u);
            max_defect = max_defect.max(defect);
            if defect > UNITARITY_DRIFT_TOL {
                return Err(Error::Numerical(format!(
                    "propagator unitarity drifted to {defect:.3e} after {} steps",
                    k + 1
                )));
            }
            if (k + 1) % REUNITARIZE_EVERY == 0 {
                u = newton_schulz_polar(&u);
            }
        }
        if (k + 1) % save_every == 0 {
            states.push(u.dot(&rho0).dot(&dagger(&u)));
        }
    }

    Ok(TrajectoryPath {
        times_t: config.save_times_t(),
        times_s: config.save_times_s(),
        states,
        max_unitarity_defect: max_defect,
    })
}

/// Step factor `exp(-i h dt)` for Hermitian `h`: closed form on qubits,
/// Padé exponential otherwise.
fn step_unitary(h: &CMat, dt: f64) -> Result<CMat> {
    if h.nrows() == 2 {
        return Ok(qubit_exponential(h, dt));
    }
    matrix_exp(&h.mapv(|z| z * C64::new(0.0, -dt)))
}

/// Closed-form `exp(-i h dt)` for Hermitian 2x2 `h`. Writing
/// `h = c 1 + B` with `B` traceless (`B^2 = b^2 1`),
///
/// ```text
/// exp(-i h dt) = e^{-i c dt} [cos(b dt) 1 - i dt sinc(b dt) B].
/// ```
fn qubit_exponential(h: &CMat, dt: f64) -> CMat {
    let c = 0.5 * (h[(0, 0)] + h[(1, 1)]).re;
    let z = h[(0, 0)].re - c;
    let w = h[(0, 1)];
    let theta = (z * z + w.norm_sqr()).sqrt() * dt;
    let sinc = if theta.abs() < 1e-6 {
        1.0 - theta * theta / 6.0
    } else {
        theta.sin() / theta
    };
    let cos = C64::new(theta.cos(), 0.0);
    let phase = C64::new(0.0, -c * dt).exp();
    let mi_dt_sinc = C64::new(0.0, -dt * sinc);

    let mut out = Array2::zeros((2, 2));
    out[(0, 0)] = phase * (cos + mi_dt_sinc * z);
    out[(0, 1)] = phase * mi_dt_sinc * w;
    out[(1, 0)] = phase * mi_dt_sinc * w.conj();
    out[(1, 1)] = phase * (cos - mi_dt_sinc * z);
    out
}

/// `max|U^+ U - 1|`.
fn unitarity_defect(u: &CMat) -> f64 {
    max_abs(&(dagger(u).dot(u) - identity(u.nrows())))
}

/// Two Newton–Schulz iterations `X <- X (3 - X^+ X)/2`, projecting onto the
/// nearest unitary; quadratically convergent for defects below one, so two
/// rounds reach machine precision from anywhere under the drift cap.
fn newton_schulz_polar(u: &CMat) -> CMat {
    let d = u.nrows();
    let mut x = u.clone();
    for _ in 0..2 {
        let correction = identity(d).mapv(|z| z * 3.0) - dagger(&x).dot(&x);
        x = x.dot(&correction).mapv(|z| z * 0.5);
    }
    x
}
