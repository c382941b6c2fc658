// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration: schema, parsing, builders, and validation.
//!
//! Configs are JSON files with an `experiment` selector and optional
//! `noise`, `control`, `sim`, `coupling`, and experiment-specific sections.
//! Every frequency is configured as the dimensionless product
//! `omega_c * tau` (with `tau = 1` for white noise, which has no
//! correlation time); every builder reports failures with the offending
//! field path.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ndarray::Array1;
use serde::{Deserialize, Serialize};

use lindblad_forge::control::ControlSchedule;
use lindblad_forge::linalg::{spin_operators, C64, DensityMatrix, HermitianOperator};
use lindblad_forge::montecarlo::SimConfig;
use lindblad_forge::noise::NoiseModel;

/// Top-level experiment description.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// One of: `gamma-of-t`, `rates-vs-omega`, `fig-compare`, `spectra`,
    /// `iso12`, `oscillator`, `custom`.
    pub experiment: String,
    /// Artifact directory (created if missing); `--out` overrides it.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub noise: Option<NoiseConfig>,
    #[serde(default)]
    pub control: Option<ControlConfig>,
    #[serde(default)]
    pub sim: Option<SimSection>,
    /// Coupling axes, one per noise channel (`"x" | "y" | "z"`, qubit).
    #[serde(default)]
    pub coupling: Option<Vec<String>>,
    /// Initial state: `plus` (default), `up`, `down`, or `mixed`.
    #[serde(default)]
    pub rho0: Option<String>,
    /// Spin quantum number for the `spectra` experiment.
    #[serde(default)]
    pub spin: Option<f64>,
    /// Fock truncation for the `oscillator` experiment.
    #[serde(default)]
    pub n_fock: Option<usize>,
    /// Dimensionless frequency grid for `rates-vs-omega` and `iso12`.
    #[serde(default)]
    pub omega_grid: Option<GridSpec>,
    /// Harmonic truncation for Fourier data and rate sums.
    #[serde(default)]
    pub n_harmonics: Option<usize>,
}

/// Uniform grid in `omega * tau`.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

/// Noise model section.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// `ou`, `damped-cosine`, `white`, or `tabulated`.
    pub kind: String,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(default)]
    pub omega0: Option<f64>,
    /// White-noise strength (the flat spectral density).
    #[serde(default)]
    pub strength: Option<f64>,
    #[serde(default = "one")]
    pub channels: usize,
    /// Sample spacing of a tabulated correlation function.
    #[serde(default)]
    pub table_dt: Option<f64>,
    /// Samples `J(0), J(dt), ...` of a tabulated correlation function.
    #[serde(default)]
    pub table_values: Option<Vec<f64>>,
}

fn one() -> usize {
    1
}

/// Control schedule section.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ControlConfig {
    /// `none`, `constant`, `bangbang-pi`, or `iso12`.
    pub kind: String,
    /// Control frequency as the dimensionless `omega_c * tau`.
    #[serde(default)]
    pub omega_c_tau: Option<f64>,
    /// Rotation axis of a constant or bang-bang control (`x | y | z`).
    #[serde(default)]
    pub axis: Option<String>,
    /// Hilbert-space dimension for `none` (defaults to 2).
    #[serde(default)]
    pub dim: Option<usize>,
}

/// Monte-Carlo section (mirrors the library's simulation config).
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub eps: f64,
    pub dt: f64,
    pub horizon_s: f64,
    #[serde(default)]
    pub save_interval_s: Option<f64>,
    pub n_traj: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Parse a config file, reporting JSON syntax errors with position info.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let config: Self = serde_json::from_str(&text)
            .with_context(|| format!("cannot parse {}", path.display()))?;
        config.check_experiment_name()?;
        Ok(config)
    }

    fn check_experiment_name(&self) -> Result<()> {
        const KNOWN: [&str; 7] = [
            "gamma-of-t",
            "rates-vs-omega",
            "fig-compare",
            "spectra",
            "iso12",
            "oscillator",
            "custom",
        ];
        if !KNOWN.contains(&self.experiment.as_str()) {
            bail!(
                "experiment: unknown name {:?} (expected one of {})",
                self.experiment,
                KNOWN.join(", ")
            );
        }
        Ok(())
    }

    /// Correlation time used to convert the dimensionless `omega_c * tau`
    /// into an angular frequency: the model's correlation time, or 1 for
    /// white noise (which has none, so the product is read in inverse lab
    /// time units).
    pub fn time_unit(&self) -> f64 {
        match &self.noise {
            Some(n) if n.kind != "white" => n.tau.unwrap_or(1.0),
            _ => 1.0,
        }
    }

    /// Build every section the experiment needs, without running anything.
    /// This is the `forge validate` entry point; the returned report lists
    /// the derived quantities.
    pub fn validate(&self) -> Result<ValidationReport> {
        let mut report = ValidationReport::default();
        report.experiment = self.experiment.clone();

        if let Some(noise) = &self.noise {
            let model = noise.build()?;
            report.noise_kind = Some(format!("{:?}", model.kind()));
            report.channels = Some(model.channels());
        }
        if let Some(control) = &self.control {
            let schedule = control.build(self.time_unit())?;
            report.control_kind = Some(format!("{:?}", schedule.kind()));
            report.omega_c = Some(schedule.omega_c());
        }
        if self.experiment == "custom" || self.experiment == "fig-compare" {
            // These run ensembles, so the full simulation config must pass
            // the library's grid checks.
            let sim = self.build_sim_config()?;
            report.coarse_rate = Some(sim.coarse_rate());
            report.n_steps = Some(sim.n_steps());
            report.save_points = Some(sim.save_times_s().len());
        } else if let Some(sim) = &self.sim {
            sim.check_basic()?;
        }
        if let Some(spin) = self.spin {
            check_spin(spin)?;
        }
        Ok(report)
    }

    /// Assemble the library simulation config from the `noise`, `control`,
    /// `sim`, `coupling`, and `rho0` sections (all required except the last
    /// two, which default to a z coupling on `|+><+|`).
    pub fn build_sim_config(&self) -> Result<SimConfig> {
        let noise = self
            .noise
            .as_ref()
            .context("noise: section is required for this experiment")?;
        let control = self
            .control
            .as_ref()
            .context("control: section is required for this experiment")?;
        let sim = self
            .sim
            .as_ref()
            .context("sim: section is required for this experiment")?;
        sim.check_basic()?;

        let model = noise.build()?;
        let schedule = control.build(self.time_unit())?;
        let ops = self.build_coupling(schedule.dim(), model.channels())?;
        let rho0 = self.build_rho0(schedule.dim())?;

        let config = SimConfig::new(
            schedule,
            model,
            ops,
            rho0,
            sim.eps,
            sim.dt,
            sim.horizon_s,
            sim.n_traj,
            sim.seed,
        )
        .map_err(|e| anyhow::anyhow!("sim: {e}"))?;
        match sim.save_interval_s {
            Some(ds) => config
                .with_save_interval_s(ds)
                .map_err(|e| anyhow::anyhow!("sim.save_interval_s: {e}")),
            None => Ok(config),
        }
    }

    /// Coupling operators from the configured axes (defaults to `["z"]`
    /// repeated per channel).
    pub fn build_coupling(
        &self,
        dim: usize,
        channels: usize,
    ) -> Result<Vec<HermitianOperator>> {
        if dim != 2 {
            bail!("coupling: axis couplings are defined for qubits (dim 2), got dim {dim}");
        }
        let axes: Vec<String> = match &self.coupling {
            Some(list) => list.clone(),
            None => vec!["z".into(); channels],
        };
        if axes.len() != channels {
            bail!(
                "coupling: got {} axis name(s) for {} noise channel(s)",
                axes.len(),
                channels
            );
        }
        axes.iter()
            .enumerate()
            .map(|(i, axis)| {
                spin_axis_operator(axis)
                    .with_context(|| format!("coupling[{i}]: unknown axis {axis:?}"))
            })
            .collect()
    }

    /// Initial state from the `rho0` selector.
    pub fn build_rho0(&self, dim: usize) -> Result<DensityMatrix> {
        let name = self.rho0.as_deref().unwrap_or("plus");
        let state = match name {
            "plus" => {
                if dim != 2 {
                    bail!("rho0: \"plus\" is a qubit state, got dim {dim}");
                }
                DensityMatrix::plus_state()
            }
            "mixed" => DensityMatrix::maximally_mixed(dim),
            "up" | "down" => {
                let mut psi = Array1::from(vec![C64::new(0.0, 0.0); dim]);
                let index = if name == "up" { 0 } else { dim - 1 };
                psi[index] = C64::new(1.0, 0.0);
                DensityMatrix::pure(&psi).map_err(|e| anyhow::anyhow!("rho0: {e}"))?
            }
            other => bail!("rho0: unknown state {other:?} (plus | up | down | mixed)"),
        };
        Ok(state)
    }
}

impl NoiseConfig {
    /// Build and physically validate the noise model.
    pub fn build(&self) -> Result<NoiseModel> {
        let need = |value: Option<f64>, field: &str| -> Result<f64> {
            value.with_context(|| {
                format!("noise.{field}: required for kind {:?}", self.kind)
            })
        };
        let model = match self.kind.as_str() {
            "ou" => NoiseModel::ou(need(self.sigma, "sigma")?, need(self.tau, "tau")?),
            "damped-cosine" => NoiseModel::damped_cosine(
                need(self.sigma, "sigma")?,
                need(self.tau, "tau")?,
                need(self.omega0, "omega0")?,
            ),
            "white" => NoiseModel::white(need(self.strength, "strength")?),
            "tabulated" => {
                let dt = need(self.table_dt, "table_dt")?;
                let values = self
                    .table_values
                    .clone()
                    .context("noise.table_values: required for kind \"tabulated\"")?;
                NoiseModel::tabulated(dt, values)
            }
            other => bail!("noise.kind: unknown kind {other:?} (ou | damped-cosine | white | tabulated)"),
        }
        .map_err(|e| anyhow::anyhow!("noise: {e}"))?;
        model
            .with_channels(self.channels)
            .map_err(|e| anyhow::anyhow!("noise.channels: {e}"))
    }
}

impl ControlConfig {
    /// Build the schedule; `tau` converts `omega_c_tau` to a frequency.
    pub fn build(&self, tau: f64) -> Result<ControlSchedule> {
        let omega = || -> Result<f64> {
            let x = self.omega_c_tau.with_context(|| {
                format!("control.omega_c_tau: required for kind {:?}", self.kind)
            })?;
            if !(x > 0.0) || !x.is_finite() {
                bail!("control.omega_c_tau: must be positive and finite, got {x}");
            }
            Ok(x / tau)
        };
        let schedule = match self.kind.as_str() {
            "none" => ControlSchedule::none(self.dim.unwrap_or(2)),
            "constant" => {
                let omega_c = omega()?;
                let axis = self.axis.as_deref().unwrap_or("x");
                let hc = spin_axis_operator(axis)
                    .with_context(|| format!("control.axis: unknown axis {axis:?}"))?;
                ControlSchedule::constant(hc.scale(omega_c), omega_c)
            }
            "bangbang-pi" => {
                let omega_c = omega()?;
                let axis = self.axis.as_deref().unwrap_or("x");
                let generator = spin_axis_operator(axis)
                    .with_context(|| format!("control.axis: unknown axis {axis:?}"))?;
                ControlSchedule::bangbang_pi(&generator, omega_c)
            }
            "iso12" => ControlSchedule::bangbang_iso12(omega()?),
            other => {
                bail!("control.kind: unknown kind {other:?} (none | constant | bangbang-pi | iso12)")
            }
        };
        schedule.map_err(|e| anyhow::anyhow!("control: {e}"))
    }
}

impl SimSection {
    /// Field-level checks that do not need the other sections.
    pub fn check_basic(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            bail!("sim.eps: out of (0,1), got {}", self.eps);
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            bail!("sim.dt: must be positive and finite, got {}", self.dt);
        }
        if !(self.horizon_s > 0.0) || !self.horizon_s.is_finite() {
            bail!("sim.horizon_s: must be positive and finite, got {}", self.horizon_s);
        }
        if self.n_traj == 0 {
            bail!("sim.n_traj: must be at least 1");
        }
        Ok(())
    }
}

/// Spin-axis operator for qubits (`S_x`, `S_y`, or `S_z`).
pub fn spin_axis_operator(axis: &str) -> Result<HermitianOperator> {
    let [sx, sy, sz] = spin_operators(0.5).map_err(|e| anyhow::anyhow!("{e}"))?;
    match axis {
        "x" => Ok(sx),
        "y" => Ok(sy),
        "z" => Ok(sz),
        other => bail!("unknown axis {other:?} (x | y | z)"),
    }
}

/// Admissible spin quantum numbers: positive integers or half-integers.
pub fn check_spin(spin: f64) -> Result<()> {
    let doubled = 2.0 * spin;
    if !(spin > 0.0) || !spin.is_finite() || (doubled - doubled.round()).abs() > 1e-12 {
        bail!("spin: must be a positive integer or half-integer, got {spin}");
    }
    Ok(())
}

/// Derived quantities surfaced by `forge validate`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub experiment: String,
    pub noise_kind: Option<String>,
    pub channels: Option<usize>,
    pub control_kind: Option<String>,
    pub omega_c: Option<f64>,
    pub coarse_rate: Option<f64>,
    pub n_steps: Option<usize>,
    pub save_points: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.check_experiment_name()?;
        Ok(config)
    }

    #[test]
    fn well_formed_fig_compare_config_is_valid() {
        let config = parse(
            r#"{
                "experiment": "fig-compare",
                "noise": {"kind": "ou", "sigma": 0.0106, "tau": 20.0},
                "control": {"kind": "bangbang-pi", "omega_c_tau": 1.5707963267948966, "axis": "x"},
                "sim": {"eps": 0.15, "dt": 1.0, "horizon_s": 2.0,
                        "save_interval_s": 0.25, "n_traj": 4, "seed": 7}
            }"#,
        )
        .unwrap();
        let report = config.validate().unwrap();
        assert_eq!(report.experiment, "fig-compare");
        assert!(report.omega_c.unwrap() > 0.0);
        assert!(report.n_steps.unwrap() > 0);
    }

    #[test]
    fn eps_out_of_range_is_rejected_with_field_path() {
        let config = parse(
            r#"{
                "experiment": "custom",
                "noise": {"kind": "ou", "sigma": 0.5, "tau": 2.0},
                "control": {"kind": "none"},
                "sim": {"eps": 1.5, "dt": 0.2, "horizon_s": 1.0, "n_traj": 4, "seed": 0}
            }"#,
        )
        .unwrap();
        let err = config.validate().unwrap_err().to_string();
        assert!(err.contains("sim.eps"), "error was: {err}");
        assert!(err.contains("(0,1)"), "error was: {err}");
    }

    #[test]
    fn negative_tabulated_spectrum_is_rejected_with_offending_frequency() {
        // A boxcar correlation has a sinc spectrum with negative lobes.
        let config = parse(
            r#"{
                "experiment": "custom",
                "noise": {"kind": "tabulated", "table_dt": 0.1,
                          "table_values": [1,1,1,1,1,1,1,1,1,1,1,1]},
                "control": {"kind": "none"},
                "sim": {"eps": 0.2, "dt": 0.2, "horizon_s": 1.0, "n_traj": 4, "seed": 0}
            }"#,
        )
        .unwrap();
        let err = format!("{:#}", config.validate().unwrap_err());
        assert!(err.contains("spectrum"), "error was: {err}");
    }

    #[test]
    fn unknown_experiment_and_unknown_fields_are_rejected() {
        assert!(parse(r#"{"experiment": "unknown"}"#).is_err());
        assert!(parse(r#"{"experiment": "spectra", "spinn": 1.0}"#).is_err());
    }
}
