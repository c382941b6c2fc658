// SPDX-License-Identifier: Apache-2.0

//! Ensemble averaging with jackknife error bars.
//!
//! Trajectories are integrated in parallel but *collected in index order*
//! and reduced by a fixed sequential sum, so results are bit-identical
//! across runs and thread counts. Error bars come from the leave-one-out
//! jackknife, which also supplies bias-corrected companions to the plug-in
//! estimates: nonlinear functionals of the ensemble mean (purity,
//! log Bloch norm) carry an `O(1/n)` bias that the jackknife removes.

use std::path::Path;

use ndarray::Array2;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, trace, CMat};
use crate::rng::derive_stream_seed;

use super::config::SimConfig;
use super::trajectory::{run_trajectory_with, StepOperators, TrajectoryPath};

/// Tolerance on the trace of the ensemble mean (exact to round-off because
/// every trajectory state has unit trace).
const MEAN_TRACE_TOL: f64 = 1e-10;

/// Most negative admissible eigenvalue of the ensemble mean. Averages of
/// projectors are PSD in exact arithmetic; the slack covers round-off.
const MEAN_PSD_TOL: f64 = -1e-8;

/// Margin on the purity range `(1/d, 1]` of the ensemble mean.
const MEAN_PURITY_TOL: f64 = 1e-10;

/// Floor for Bloch norms before taking the logarithm.
const BLOCH_NORM_FLOOR: f64 = 1e-300;

/// Qubit coherence summary at one save instant.
#[derive(Debug, Clone)]
pub struct BlochStats {
    /// Bloch vector of the ensemble mean state.
    pub mean: [f64; 3],
    /// `ln |r|` of the ensemble mean (plug-in estimate).
    pub lognorm: f64,
    /// Jackknife bias-corrected `ln |r|`.
    pub lognorm_debiased: f64,
    /// Jackknife standard error of `ln |r|` (NaN for a single trajectory).
    pub se: f64,
}

/// Ensemble-averaged states and derived statistics on the save grid.
#[derive(Debug, Clone)]
pub struct EnsembleResult {
    times_t: Vec<f64>,
    times_s: Vec<f64>,
    states: Vec<CMat>,
    purity: Vec<f64>,
    purity_debiased: Vec<f64>,
    purity_se: Vec<f64>,
    bloch: Option<Vec<BlochStats>>,
    n_traj: usize,
    max_unitarity_defect: f64,
    warnings: Vec<String>,
    config_json: serde_json::Value,
}

impl EnsembleResult {
    /// Lab times of the saved states.
    pub fn times_t(&self) -> &[f64] {
        &self.times_t
    }

    /// Coarse times of the saved states.
    pub fn times_s(&self) -> &[f64] {
        &self.times_s
    }

    /// Ensemble mean density matrix at each save instant.
    pub fn states(&self) -> &[CMat] {
        &self.states
    }

    /// Plug-in purity `Tr(rho_mean^2)` per save instant.
    pub fn purity(&self) -> &[f64] {
        &self.purity
    }

    /// Jackknife bias-corrected purity per save instant.
    pub fn purity_debiased(&self) -> &[f64] {
        &self.purity_debiased
    }

    /// Jackknife standard error of the purity per save instant.
    pub fn purity_se(&self) -> &[f64] {
        &self.purity_se
    }

    /// Qubit coherence summaries (None unless the system is a qubit).
    pub fn bloch(&self) -> Option<&[BlochStats]> {
        self.bloch.as_deref()
    }

    /// Number of trajectories averaged.
    pub fn n_traj(&self) -> usize {
        self.n_traj
    }

    /// Largest propagator unitarity defect over all trajectories.
    pub fn max_unitarity_defect(&self) -> f64 {
        self.max_unitarity_defect
    }

    /// Non-fatal diagnostics collected from the sampler.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Full parameter record of the run.
    pub fn config_json(&self) -> &serde_json::Value {
        &self.config_json
    }

    /// Write the per-instant statistics as CSV.
    ///
    /// Columns: `s, t, purity, purity_se, bloch_lognorm, bloch_se`, then
    /// the bias-corrected companions and the mean Bloch components. Bloch
    /// cells are empty for non-qubit systems.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| Error::Serialization(format!("csv open: {e}")))?;
        w.write_record([
            "s",
            "t",
            "purity",
            "purity_se",
            "bloch_lognorm",
            "bloch_se",
            "purity_debiased",
            "bloch_lognorm_debiased",
            "bloch_x",
            "bloch_y",
            "bloch_z",
        ])
        .map_err(|e| Error::Serialization(format!("csv header: {e}")))?;
        for j in 0..self.times_s.len() {
            let b = self.bloch.as_ref().map(|list| &list[j]);
            let field = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            w.write_record([
                self.times_s[j].to_string(),
                self.times_t[j].to_string(),
                self.purity[j].to_string(),
                self.purity_se[j].to_string(),
                field(b.map(|b| b.lognorm)),
                field(b.map(|b| b.se)),
                self.purity_debiased[j].to_string(),
                field(b.map(|b| b.lognorm_debiased)),
                field(b.map(|b| b.mean[0])),
                field(b.map(|b| b.mean[1])),
                field(b.map(|b| b.mean[2])),
            ])
            .map_err(|e| Error::Serialization(format!("csv row: {e}")))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Write the JSON sidecar recording every parameter of the run plus the
    /// ensemble diagnostics.
    pub fn write_json_sidecar(&self, path: &Path) -> Result<()> {
        let sidecar = json!({
            "config": self.config_json,
            "n_traj": self.n_traj,
            "n_save": self.times_s.len(),
            "max_unitarity_defect": self.max_unitarity_defect,
            "warnings": self.warnings,
        });
        let text = serde_json::to_string_pretty(&sidecar)
            .map_err(|e| Error::Serialization(format!("sidecar encode: {e}")))?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

/// Integrate and average the configured ensemble.
///
/// Per-trajectory seeds derive from `(config.seed(), index)`; execution is
/// parallel over trajectories but the reduction order is fixed, so repeated
/// runs produce bit-identical results.
pub fn run_ensemble(config: &SimConfig) -> Result<EnsembleResult> {
    let mids = StepOperators::new(config)?;
    let n = config.n_traj();
    let nf = n as f64;
    let dim = config.schedule().dim();

    // Sampler diagnostics depend only on (model, dt); surface them once.
    let warnings = config
        .model()
        .sample(config.dt(), 1, derive_stream_seed(config.seed(), 0))?
        .warnings;

    let paths: Vec<TrajectoryPath> = (0..n as u64)
        .into_par_iter()
        .map(|i| run_trajectory_with(config, &mids, i))
        .collect::<Result<Vec<_>>>()?;

    let times_t = config.save_times_t();
    let times_s = config.save_times_s();
    let n_save = times_t.len();

    let mut states = Vec::with_capacity(n_save);
    let mut purity = Vec::with_capacity(n_save);
    let mut purity_debiased = Vec::with_capacity(n_save);
    let mut purity_se = Vec::with_capacity(n_save);
    let mut bloch: Option<Vec<BlochStats>> = (dim == 2).then(Vec::new);

    for j in 0..n_save {
        // Fixed-order sequential sum over trajectory index.
        let mut total: CMat = Array2::zeros((dim, dim));
        for path in &paths {
            total += &path.states()[j];
        }
        let mean = total.mapv(|z| z / nf);
        validate_mean_state(&mean, times_s[j])?;

        let theta_hat = frob_sq(&mean);
        let mut purity_loo = Vec::new();
        let mut bloch_loo = Vec::new();
        if n >= 2 {
            purity_loo.reserve(n);
            let scale = 1.0 / (nf - 1.0);
            for path in &paths {
                let loo = (&total - &path.states()[j]).mapv(|z| z * scale);
                purity_loo.push(frob_sq(&loo));
                if bloch.is_some() {
                    bloch_loo.push(log_bloch_norm(&loo));
                }
            }
        }
        let (p_deb, p_se) = jackknife(theta_hat, &purity_loo);
        purity.push(theta_hat);
        purity_debiased.push(p_deb);
        purity_se.push(p_se);

        if let Some(list) = bloch.as_mut() {
            let r = bloch_of(&mean);
            let lognorm = log_bloch_norm(&mean);
            let (b_deb, b_se) = jackknife(lognorm, &bloch_loo);
            list.push(BlochStats {
                mean: r,
                lognorm,
                lognorm_debiased: b_deb,
                se: b_se,
            });
        }
        states.push(mean);
    }

    let max_unitarity_defect = paths
        .iter()
        .map(TrajectoryPath::max_unitarity_defect)
        .fold(0.0_f64, f64::max);

    Ok(EnsembleResult {
        times_t,
        times_s,
        states,
        purity,
        purity_debiased,
        purity_se,
        bloch,
        n_traj: n,
        max_unitarity_defect,
        warnings,
        config_json: config.to_json(),
    })
}

/// Jackknife bias correction and standard error for a plug-in functional.
///
/// Given the full-sample estimate and the leave-one-out estimates, returns
/// `(n theta - (n-1) mean_loo, sqrt((n-1)/n sum (loo - mean_loo)^2))`. The
/// standard error is NaN when fewer than two samples exist.
fn jackknife(theta_hat: f64, leave_one_out: &[f64]) -> (f64, f64) {
    let n = leave_one_out.len() as f64;
    if leave_one_out.len() < 2 {
        return (theta_hat, f64::NAN);
    }
    let mean = leave_one_out.iter().sum::<f64>() / n;
    let debiased = n * theta_hat - (n - 1.0) * mean;
    let var = leave_one_out
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .sum::<f64>()
        * (n - 1.0)
        / n;
    (debiased, var.sqrt())
}

/// `Tr(m^2)` for Hermitian `m` (the squared Frobenius norm).
pub(super) fn frob_sq(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Bloch vector of a qubit density matrix given as a raw array.
pub(super) fn bloch_of(m: &CMat) -> [f64; 3] {
    [
        2.0 * m[(0, 1)].re,
        -2.0 * m[(0, 1)].im,
        (m[(0, 0)] - m[(1, 1)]).re,
    ]
}

/// `ln |r|`, floored away from zero so fully depolarized states stay finite.
fn log_bloch_norm(m: &CMat) -> f64 {
    let r = bloch_of(m);
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    norm.max(BLOCH_NORM_FLOOR).ln()
}

/// State invariants of the ensemble mean: unit trace, Hermiticity,
/// positivity, and purity inside `(1/d, 1]` (all up to round-off slack).
/// Violations indicate an averaging bug, hence the hard error.
fn validate_mean_state(mean: &CMat, s: f64) -> Result<()> {
    let d = mean.nrows();
    let tr = trace(mean);
    if (tr.re - 1.0).abs() > MEAN_TRACE_TOL || tr.im.abs() > MEAN_TRACE_TOL {
        return Err(Error::Numerical(format!(
            "ensemble mean at s={s} has trace {tr} (expected 1)"
        )));
    }
    if hermiticity_defect(mean) > MEAN_TRACE_TOL {
        return Err(Error::Numerical(format!(
            "ensemble mean at s={s} lost Hermiticity"
        )));
    }
    let eigs = hermitian_eigenvalues(mean)?;
    if eigs.first().copied().unwrap_or(0.0) < MEAN_PSD_TOL {
        return Err(Error::Numerical(format!(
            "ensemble mean at s={s} has negative eigenvalue {:.3e}",
            eigs[0]
        )));
    }
    let p = frob_sq(mean);
    if p <= 1.0 / d as f64 - MEAN_PURITY_TOL || p > 1.0 + MEAN_PURITY_TOL {
        return Err(Error::Numerical(format!(
            "ensemble mean at s={s} has purity {p} outside (1/{d}, 1]"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::ControlSchedule;
    use crate::linalg::{spin_operators, DensityMatrix, HermitianOperator};
    use crate::noise::NoiseModel;

    fn dephasing_config(
        sigma: f64,
        tau: f64,
        dt: f64,
        eps: f64,
        horizon_s: f64,
        n_traj: usize,
        seed: u64,
    ) -> SimConfig {
        let [_, _, sz] = spin_operators(0.5).unwrap();
        SimConfig::new(
            ControlSchedule::none(2).unwrap(),
            NoiseModel::ou(sigma, tau).unwrap(),
            vec![sz],
            DensityMatrix::plus_state(),
            eps,
            dt,
            horizon_s,
            n_traj,
            seed,
        )
        .unwrap()
    }

    /// The mean state passes all invariants, coherence decays, and the
    /// jackknife error bars are finite and positive once n > 1.
    #[test]
    fn ensemble_mean_satisfies_state_invariants() {
        let config = dephasing_config(0.5, 2.0, 0.2, 0.2, 0.6, 32, 42);
        let result = run_ensemble(&config).unwrap();
        assert_eq!(result.n_traj(), 32);
        assert_eq!(result.states().len(), result.times_s().len());
        assert!(result.max_unitarity_defect() < 1e-9);
        assert!(result.warnings().is_empty());

        let purity = result.purity();
        assert!((purity[0] - 1.0).abs() < 1e-12);
        assert!(purity[purity.len() - 1] < purity[0] - 1e-3);
        let bloch = result.bloch().expect("qubit runs carry Bloch stats");
        // Dephasing shrinks x, leaves z near zero.
        assert!(bloch[bloch.len() - 1].mean[0] < bloch[0].mean[0]);
        for j in 1..purity.len() {
            assert!(result.purity_se()[j].is_finite());
            assert!(result.purity_se()[j] >= 0.0);
        }
    }

    /// Identical configurations reduce to bit-identical statistics: the
    /// collection is ordered and the reduction sequential.
    #[test]
    fn repeated_runs_are_bit_identical() {
        let config = dephasing_config(0.4, 1.5, 0.15, 0.25, 0.4, 12, 7);
        let a = run_ensemble(&config).unwrap();
        let b = run_ensemble(&config).unwrap();
        assert_eq!(a.purity(), b.purity());
        assert_eq!(a.purity_se(), b.purity_se());
        for (x, y) in a.states().iter().zip(b.states()) {
            assert_eq!(x, y);
        }
    }

    /// Ensemble coherence against the exactly known Gaussian average: for
    /// discretely sampled stationary OU dephasing,
    ///
    /// ```text
    /// E[x(t_k)] = exp(-V_k / 2),
    /// V_k = dt^2 [ k J(0) + 2 sum_{m<k} (k - m) J(m dt) ],
    /// ```
    ///
    /// and the fluctuation of `x = cos(phi)` around the mean has known
    /// variance, so a three-standard-error band is an exact statistical
    /// test free of discretization bias (the sampler is exact, and pure
    /// dephasing integrates exactly).
    #[test]
    fn dephasing_coherence_matches_exact_gaussian_average() {
        let (sigma, tau, dt, eps, horizon_s, n_traj) = (0.35, 2.0, 0.2, 0.3, 0.9, 600);
        let config = dephasing_config(sigma, tau, dt, eps, horizon_s, n_traj, 2024);
        let result = run_ensemble(&config).unwrap();
        let save_every = config.save_every();
        let nf = n_traj as f64;

        let corr = |u: f64| sigma * sigma * (-u.abs() / tau).exp();
        for (j, bloch) in result.bloch().unwrap().iter().enumerate() {
            let k = j * save_every;
            let mut var = k as f64 * corr(0.0);
            for m in 1..k {
                var += 2.0 * (k - m) as f64 * corr(m as f64 * dt);
            }
            var *= dt * dt;

            // E[cos phi] = e^{-V/2}; Var[cos phi] = (1 + e^{-2V})/2 - e^{-V}.
            let mean_x = (-0.5 * var).exp();
            let var_x = 0.5 * (1.0 + (-2.0 * var).exp()) - (-var).exp();
            let se_x = (var_x / nf).sqrt();
            assert!(
                (bloch.mean[0] - mean_x).abs() <= 3.0 * se_x + 1e-12,
                "s={}: x = {} vs exact {} (3 SE = {})",
                result.times_s()[j],
                bloch.mean[0],
                mean_x,
                3.0 * se_x
            );

            // E[sin phi] = 0; Var[sin phi] = (1 - e^{-2V})/2.
            let se_y = (0.5 * (1.0 - (-2.0 * var).exp()) / nf).sqrt();
            assert!(
                bloch.mean[1].abs() <= 3.0 * se_y + 1e-12,
                "s={}: y = {} (3 SE = {})",
                result.times_s()[j],
                bloch.mean[1],
                3.0 * se_y
            );
        }
    }

    /// CSV and sidecar land on disk with the documented layout.
    #[test]
    fn csv_and_sidecar_roundtrip() {
        let config = dephasing_config(0.5, 2.0, 0.2, 0.2, 0.3, 3, 1);
        let result = run_ensemble(&config).unwrap();

        let dir = std::env::temp_dir();
        let csv_path = dir.join("ensemble_roundtrip_test.csv");
        let json_path = dir.join("ensemble_roundtrip_test.json");
        result.write_csv(&csv_path).unwrap();
        result.write_json_sidecar(&json_path).unwrap();

        let text = std::fs::read_to_string(&csv_path).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("s,t,purity,purity_se,bloch_lognorm,bloch_se"));
        assert_eq!(lines.count(), result.times_s().len());

        let sidecar: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
        assert_eq!(sidecar["n_traj"], 3);
        assert_eq!(sidecar["config"]["noise_kind"], "Ou");
        assert!(sidecar["max_unitarity_defect"].as_f64().unwrap() < 1e-9);

        std::fs::remove_file(&csv_path).ok();
        std::fs::remove_file(&json_path).ok();
    }

    /// A two-channel model must be paired with two coupling operators and
    /// produces a valid ensemble (smoke test for multi-channel plumbing).
    #[test]
    fn two_channel_ensemble_runs() {
        let [sx, sy, _] = spin_operators(0.5).unwrap();
        let model = NoiseModel::ou(0.4, 1.0)
            .unwrap()
            .with_channels(2)
            .unwrap();
        let ops: Vec<HermitianOperator> = vec![sx, sy];
        let config = SimConfig::new(
            ControlSchedule::none(2).unwrap(),
            model,
            ops,
            DensityMatrix::plus_state(),
            0.2,
            0.1,
            0.2,
            8,
            3,
        )
        .unwrap();
        let result = run_ensemble(&config).unwrap();
        assert!(result.purity().iter().all(|p| (0.5 - 1e-10..=1.0 + 1e-10).contains(p)));
    }
}
