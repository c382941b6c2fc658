// SPDX-License-Identifier: Apache-2.0

//! Simulation configuration and grid bookkeeping.

use serde_json::json;

use crate::control::ControlSchedule;
use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, HermitianOperator};
use crate::noise::{NoiseKind, NoiseModel};

/// Minimum number of integration steps per noise correlation time.
pub const MIN_TAU_OVER_DT: f64 = 10.0;

/// Maximum control phase advanced per integration step.
pub const MAX_OMEGA_C_DT: f64 = 0.3;

/// Full description of a stochastic-trajectory simulation.
///
/// The integration runs on the lab-time grid `t_k = k dt` out to a horizon
/// given in coarse time `s`; states are recorded every
/// [`SimConfig::save_every`] steps. The coarse-time map is `s = eps^2 t /
/// tau` for correlated noise; white noise has no coarse-graining scale and
/// uses `s = t` (its generator is exact in lab time).
#[derive(Clone, Debug)]
pub struct SimConfig {
    schedule: ControlSchedule,
    model: NoiseModel,
    ops: Vec<HermitianOperator>,
    rho0: DensityMatrix,
    eps: f64,
    dt: f64,
    horizon_s: f64,
    save_interval_s: f64,
    n_traj: usize,
    seed: u64,
}

impl SimConfig {
    /// Validate and assemble a simulation configuration.
    ///
    /// Invariants enforced here:
    /// - `eps` in `(0, 1)`, `n_traj >= 1`, positive finite `dt` and
    ///   `horizon_s`;
    /// - the step resolves the noise (`tau/dt >= 10` for correlated kinds)
    ///   and the control (`omega_c * dt <= 0.3`);
    /// - one coupling operator per noise channel, all dimensions matching
    ///   the schedule and the initial state;
    /// - the model must be samplable (tabulated correlations are not).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        schedule: ControlSchedule,
        model: NoiseModel,
        ops: Vec<HermitianOperator>,
        rho0: DensityMatrix,
        eps: f64,
        dt: f64,
        horizon_s: f64,
        n_traj: usize,
        seed: u64,
    ) -> Result<Self> {
        if !eps.is_finite() || eps <= 0.0 || eps >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "eps must lie strictly inside (0, 1), got {eps}"
            )));
        }
        if n_traj == 0 {
            return Err(Error::InvalidParameter(
                "n_traj must be at least 1".into(),
            ));
        }
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive and finite, got {dt}"
            )));
        }
        if !horizon_s.is_finite() || horizon_s <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive and finite, got {horizon_s}"
            )));
        }
        match model.kind() {
            NoiseKind::Ou | NoiseKind::DampedCosine => {
                if model.tau() / dt < MIN_TAU_OVER_DT {
                    return Err(Error::InvalidParameter(format!(
                        "dt = {dt} does not resolve the correlation time: \
                         tau/dt = {:.3} < {MIN_TAU_OVER_DT}",
                        model.tau() / dt
                    )));
                }
            }
            NoiseKind::White => {}
            NoiseKind::Tabulated => {
                return Err(Error::InvalidNoiseModel(
                    "tabulated correlations have no exact sampler; fit an \
                     analytic kind for trajectory simulation"
                        .into(),
                ));
            }
        }
        if schedule.omega_c() * dt > MAX_OMEGA_C_DT {
            return Err(Error::InvalidParameter(format!(
                "dt = {dt} does not resolve the control: omega_c * dt = {:.3} > \
                 {MAX_OMEGA_C_DT}",
                schedule.omega_c() * dt
            )));
        }
        if ops.len() != model.channels() {
            return Err(Error::InvalidParameter(format!(
                "got {} coupling operator(s) for {} noise channel(s)",
                ops.len(),
                model.channels()
            )));
        }
        if ops.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one coupling operator is required".into(),
            ));
        }
        for op in &ops {
            if op.dim() != schedule.dim() {
                return Err(Error::Dimension(format!(
                    "coupling operator dimension {} does not match schedule \
                     dimension {}",
                    op.dim(),
                    schedule.dim()
                )));
            }
        }
        if rho0.dim() != schedule.dim() {
            return Err(Error::Dimension(format!(
                "initial state dimension {} does not match schedule dimension {}",
                rho0.dim(),
                schedule.dim()
            )));
        }
        let save_interval_s = horizon_s / 50.0;
        Ok(Self {
            schedule,
            model,
            ops,
            rho0,
            eps,
            dt,
            horizon_s,
            save_interval_s,
            n_traj,
            seed,
        })
    }

    /// Override the default save spacing (`horizon/50`) in coarse time.
    /// The effective spacing is rounded to a whole number of steps.
    pub fn with_save_interval_s(mut self, ds: f64) -> Result<Self> {
        if !ds.is_finite() || ds <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "save interval must be positive and finite, got {ds}"
            )));
        }
        self.save_interval_s = ds;
        Ok(self)
    }

    /// Control schedule.
    pub fn schedule(&self) -> &ControlSchedule {
        &self.schedule
    }

    /// Noise model (one i.i.d. process per channel).
    pub fn model(&self) -> &NoiseModel {
        &self.model
    }

    /// Coupling operators, one per channel.
    pub fn ops(&self) -> &[HermitianOperator] {
        &self.ops
    }

    /// Initial state.
    pub fn rho0(&self) -> &DensityMatrix {
        &self.rho0
    }

    /// Weak-coupling bookkeeping parameter (sets the coarse-time scale).
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Integration step.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Horizon in coarse time.
    pub fn horizon_s(&self) -> f64 {
        self.horizon_s
    }

    /// Number of trajectories.
    pub fn n_traj(&self) -> usize {
        self.n_traj
    }

    /// Master seed; per-trajectory and per-channel streams are derived.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Steps per correlation time (infinite for white noise).
    pub fn tau_over_dt(&self) -> f64 {
        if self.model.kind() == NoiseKind::White {
            f64::INFINITY
        } else {
            self.model.tau() / self.dt
        }
    }

    /// Control phase advanced per step.
    pub fn omega_c_dt(&self) -> f64 {
        self.schedule.omega_c() * self.dt
    }

    /// `ds/dt`: the coarse-time rate `eps^2 / tau`, or 1 for white noise.
    pub fn coarse_rate(&self) -> f64 {
        if self.model.kind() == NoiseKind::White {
            1.0
        } else {
            self.eps * self.eps / self.model.tau()
        }
    }

    /// Number of integration steps between saved states (at least 1).
    pub fn save_every(&self) -> usize {
        let steps = self.save_interval_s / (self.coarse_rate() * self.dt);
        (steps.round() as usize).max(1)
    }

    /// Total number of integration steps: the horizon rounded up to a
    /// whole number of save intervals.
    pub fn n_steps(&self) -> usize {
        let horizon_t = self.horizon_s / self.coarse_rate();
        let raw_steps = horizon_t / self.dt;
        let save_every = self.save_every();
        let n_saves = (raw_steps / save_every as f64).ceil().max(1.0) as usize;
        n_saves * save_every
    }

    /// Lab times of the saved states, starting at `t = 0`.
    pub fn save_times_t(&self) -> Vec<f64> {
        let save_every = self.save_every();
        let n_saves = self.n_steps() / save_every;
        (0..=n_saves)
            .map(|k| (k * save_every) as f64 * self.dt)
            .collect()
    }

    /// Coarse times of the saved states.
    pub fn save_times_s(&self) -> Vec<f64> {
        let rate = self.coarse_rate();
        self.save_times_t().into_iter().map(|t| t * rate).collect()
    }

    /// Summary of every parameter that determines the run, for the export
    /// sidecar and the experiment manifests.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "dim": self.schedule.dim(),
            "schedule_kind": format!("{:?}", self.schedule.kind()),
            "omega_c": self.schedule.omega_c(),
            "noise_kind": format!("{:?}", self.model.kind()),
            "sigma": self.model.sigma(),
            "tau": self.model.tau(),
            "omega0": self.model.omega0(),
            "white_strength": self.model.white_strength(),
            "channels": self.model.channels(),
            "eps": self.eps,
            "dt": self.dt,
            "horizon_s": self.horizon_s,
            "save_interval_s": self.save_interval_s,
            "save_every_steps": self.save_every(),
            "n_steps": self.n_steps(),
            "n_traj": self.n_traj,
            "seed": self.seed,
            "tau_over_dt": if self.tau_over_dt().is_finite() {
                json!(self.tau_over_dt())
            } else {
                json!("inf")
            },
            "omega_c_dt": self.omega_c_dt(),
            "rho0": self.rho0.to_json(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spin_operators;

    fn qubit_parts() -> (ControlSchedule, NoiseModel, Vec<HermitianOperator>, DensityMatrix) {
        let [_, _, sz] = spin_operators(0.5).unwrap();
        (
            ControlSchedule::none(2).unwrap(),
            NoiseModel::ou(0.5, 2.0).unwrap(),
            vec![sz],
            DensityMatrix::plus_state(),
        )
    }

    #[test]
    fn accepts_resolved_grids_and_reports_them() {
        let (schedule, model, ops, rho0) = qubit_parts();
        let config =
            SimConfig::new(schedule, model, ops, rho0, 0.2, 0.2, 1.0, 100, 7).unwrap();
        assert!((config.tau_over_dt() - 10.0).abs() < 1e-12);
        assert_eq!(config.omega_c_dt(), 0.0);
        // Coarse rate eps^2/tau = 0.02; default save interval 1/50 of the
        // horizon -> 5 steps each.
        assert!((config.coarse_rate() - 0.02).abs() < 1e-15);
        assert_eq!(config.save_every(), 5);
        assert_eq!(config.n_steps() % config.save_every(), 0);
        let ts = config.save_times_t();
        let ss = config.save_times_s();
        assert_eq!(ts.len(), ss.len());
        assert_eq!(ts[0], 0.0);
        assert!((ss[1] - 0.02).abs() < 1e-12);
        // Horizon covered.
        assert!(*ss.last().unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn rejects_unresolved_noise_or_control() {
        let (schedule, model, ops, rho0) = qubit_parts();
        // tau/dt = 4 < 10.
        assert!(SimConfig::new(
            schedule.clone(),
            model.clone(),
            ops.clone(),
            rho0.clone(),
            0.2,
            0.5,
            1.0,
            10,
            0
        )
        .is_err());

        // omega_c * dt = 0.6 > 0.3.
        let [sx, _, _] = spin_operators(0.5).unwrap();
        let fast = ControlSchedule::constant(sx.scale(3.0), 3.0).unwrap();
        assert!(SimConfig::new(
            fast,
            model.clone(),
            ops.clone(),
            rho0.clone(),
            0.2,
            0.2,
            1.0,
            10,
            0
        )
        .is_err());

        // eps outside (0, 1).
        for bad_eps in [0.0, 1.0, 1.5, -0.1] {
            assert!(SimConfig::new(
                schedule.clone(),
                model.clone(),
                ops.clone(),
                rho0.clone(),
                bad_eps,
                0.2,
                1.0,
                10,
                0
            )
            .is_err());
        }
    }

    #[test]
    fn rejects_channel_mismatch_and_tabulated_models() {
        let (schedule, model, mut ops, rho0) = qubit_parts();
        ops.push(ops[0].clone());
        assert!(SimConfig::new(
            schedule.clone(),
            model,
            ops.clone(),
            rho0.clone(),
            0.2,
            0.2,
            1.0,
            10,
            0
        )
        .is_err());
        ops.pop();

        let values: Vec<f64> = (0..64).map(|k| (-(k as f64) * 0.1).exp()).collect();
        let tab = NoiseModel::tabulated(0.1, values).unwrap();
        assert!(SimConfig::new(schedule, tab, ops, rho0, 0.2, 0.2, 1.0, 10, 0).is_err());
    }

    #[test]
    fn white_noise_uses_lab_time_directly() {
        let (schedule, _, ops, rho0) = qubit_parts();
        let model = NoiseModel::white(0.3).unwrap();
        let config =
            SimConfig::new(schedule, model, ops, rho0, 0.2, 0.05, 1.0, 10, 0).unwrap();
        assert_eq!(config.coarse_rate(), 1.0);
        assert!(config.tau_over_dt().is_infinite());
        let ts = config.save_times_t();
        let ss = config.save_times_s();
        assert_eq!(ts, ss);
    }
}
