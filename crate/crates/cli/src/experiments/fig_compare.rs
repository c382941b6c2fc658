// SPDX-License-Identifier: Apache-2.0

//! Head-to-head decoherence comparison: the same noise realizations drive
//! a free qubit, a constantly driven qubit, and a bang-bang driven qubit;
//! each ensemble is then compared against its coarse-grained generator.
//!
//! The headline check fits an exponential decay to the squared Bloch
//! norm (weighted least squares on `2 ln |r|` over coarse time) and
//! requires the bang-bang decay constant to undercut the undriven one by
//! at least three combined standard errors.

use std::path::Path;

use anyhow::{Context, Result};

use lindblad_forge::control::ControlSchedule;
use lindblad_forge::generators::coarse_grained_lindbladian;
use lindblad_forge::montecarlo::{
    compare, evolve_generator, run_ensemble, ComparisonReport, EnsembleResult, GeneratorFamily,
    SimConfig,
};

use super::{fmt, write_csv, ExperimentOutcome};
use crate::config::ExperimentConfig;

/// A constant drive rotates the coupling at exactly `+-omega_c`; four
/// harmonics cover it with margin.
const N_HARMONICS_CONSTANT: usize = 4;
/// The square wave needs its odd harmonics resolved until the spectral
/// tail is negligible.
const N_HARMONICS_BB: usize = 41;
/// Separation required between the undriven and bang-bang decay
/// constants, in combined standard errors.
const SEPARATION_SIGMAS: f64 = 3.0;
/// Weighted-fit points with standard errors below this are degenerate
/// (e.g. the initial state) and are skipped.
const SE_FLOOR: f64 = 1e-14;

struct Arm {
    label: &'static str,
    ensemble: EnsembleResult,
    report: ComparisonReport,
    kappa: f64,
    kappa_var: f64,
    n_fit: usize,
}

pub fn run(config: &ExperimentConfig, out_dir: &Path, outcome: &mut ExperimentOutcome) -> Result<()> {
    let control = config
        .control
        .as_ref()
        .context("control: section is required for fig-compare")?;
    let sim = config
        .sim
        .as_ref()
        .context("sim: section is required for fig-compare")?;
    sim.check_basic()?;
    let noise = config
        .noise
        .as_ref()
        .context("noise: section is required for fig-compare")?;
    let model = noise.build()?;
    let tau = config.time_unit();
    let omega_c_tau = control
        .omega_c_tau
        .context("control.omega_c_tau: required for fig-compare")?;
    let omega_c = omega_c_tau / tau;
    let axis = control.axis.as_deref().unwrap_or("x");
    let drive = crate::config::spin_axis_operator(axis)
        .with_context(|| format!("control.axis: unknown axis {axis:?}"))?;

    let ops = config.build_coupling(2, model.channels())?;
    let rho0 = config.build_rho0(2)?;
    let n_bb = config.n_harmonics.unwrap_or(N_HARMONICS_BB);

    let schedules: [(&'static str, ControlSchedule, usize); 3] = [
        (
            "none",
            ControlSchedule::none(2).map_err(|e| anyhow::anyhow!("{e}"))?,
            1,
        ),
        (
            "constant",
            ControlSchedule::constant(drive.scale(omega_c), omega_c)
                .map_err(|e| anyhow::anyhow!("{e}"))?,
            N_HARMONICS_CONSTANT,
        ),
        (
            "bangbang",
            ControlSchedule::bangbang_pi(&drive, omega_c).map_err(|e| anyhow::anyhow!("{e}"))?,
            n_bb,
        ),
    ];

    let mut arms = Vec::with_capacity(3);
    for (label, schedule, n_harmonics) in schedules {
        // Same seed for every arm: common noise realizations cancel out
        // of the decay-constant difference.
        let sim_config = SimConfig::new(
            schedule,
            model.clone(),
            ops.clone(),
            rho0.clone(),
            sim.eps,
            sim.dt,
            sim.horizon_s,
            sim.n_traj,
            sim.seed,
        )
        .map_err(|e| anyhow::anyhow!("sim ({label}): {e}"))?;
        let sim_config = match sim.save_interval_s {
            Some(ds) => sim_config
                .with_save_interval_s(ds)
                .map_err(|e| anyhow::anyhow!("sim.save_interval_s: {e}"))?,
            None => sim_config,
        };
        let ensemble = run_ensemble(&sim_config).map_err(|e| anyhow::anyhow!("{label}: {e}"))?;
        for w in ensemble.warnings() {
            outcome.log(format!("{label}: {w}"));
        }

        let fourier = sim_config
            .schedule()
            .fourier_data(sim_config.ops(), n_harmonics)
            .map_err(|e| anyhow::anyhow!("{label}: {e}"))?;
        let parts =
            coarse_grained_lindbladian(&fourier, &model).map_err(|e| anyhow::anyhow!("{label}: {e}"))?;
        let total = parts.total();
        let predicted = evolve_generator(
            &GeneratorFamily::Constant(&total),
            &rho0,
            ensemble.times_t(),
        )
        .map_err(|e| anyhow::anyhow!("{label}: {e}"))?;
        let report = compare(&ensemble, &predicted).map_err(|e| anyhow::anyhow!("{label}: {e}"))?;

        let (kappa, kappa_var, n_fit) = fit_decay(&ensemble)
            .with_context(|| format!("{label}: not enough resolved points for the decay fit"))?;
        outcome.log(format!(
            "{label}: kappa = {} +- {} ({} fit point(s), {} harmonic(s), comparison score {:.3}, max trace distance {:.4})",
            fmt(kappa),
            fmt(kappa_var.sqrt()),
            n_fit,
            n_harmonics,
            report.score(),
            report.max_trace_distance()
        ));
        arms.push(Arm { label, ensemble, report, kappa, kappa_var, n_fit });
    }

    write_rows(out_dir, &arms, outcome)?;

    let none = &arms[0];
    let bb = &arms[2];
    let gap = none.kappa - bb.kappa;
    let sigma = (none.kappa_var + bb.kappa_var).sqrt();
    outcome.check(
        "bb_decays_slower_than_free",
        gap > SEPARATION_SIGMAS * sigma,
        format!(
            "kappa_none - kappa_bb = {} vs {} sigma = {}",
            fmt(gap),
            fmt(SEPARATION_SIGMAS),
            fmt(SEPARATION_SIGMAS * sigma)
        ),
    );
    let constant = &arms[1];
    outcome.log(format!(
        "constant-drive decay sits between: kappa_constant = {} (free {}, bang-bang {})",
        fmt(constant.kappa),
        fmt(none.kappa),
        fmt(bb.kappa)
    ));
    Ok(())
}

fn write_rows(out_dir: &Path, arms: &[Arm], outcome: &mut ExperimentOutcome) -> Result<()> {
    let mut rows = Vec::new();
    for arm in arms {
        let bloch = arm.ensemble.bloch().expect("qubit ensembles carry Bloch stats");
        for (j, row) in arm.report.rows().iter().enumerate() {
            rows.push(vec![
                arm.label.to_string(),
                fmt(row.s),
                fmt(row.t),
                fmt(row.purity_mc),
                fmt(row.purity_se),
                fmt(bloch[j].lognorm),
                fmt(bloch[j].se),
                fmt(row.purity_predicted),
                fmt(row.trace_distance),
                fmt(row.z_purity),
            ]);
        }
    }
    let path = out_dir.join("fig_compare.csv");
    write_csv(
        &path,
        &[
            "schedule",
            "s",
            "t",
            "purity_mc",
            "purity_se",
            "bloch_lognorm",
            "bloch_lognorm_se",
            "purity_predicted",
            "trace_distance",
            "z_purity",
        ],
        &rows,
    )?;
    outcome.artifacts.push(path);

    let fit_rows: Vec<Vec<String>> = arms
        .iter()
        .map(|arm| {
            vec![
                arm.label.to_string(),
                fmt(arm.kappa),
                fmt(arm.kappa_var.sqrt()),
                arm.n_fit.to_string(),
            ]
        })
        .collect();
    let path = out_dir.join("decay_fits.csv");
    write_csv(&path, &["schedule", "kappa", "kappa_se", "n_points"], &fit_rows)?;
    outcome.artifacts.push(path);
    Ok(())
}

/// Weighted least-squares decay constant of the squared Bloch norm over
/// coarse time: fit `2 ln |r(s)| = a - kappa s` with weights
/// `1/(2 se)^2`, returning `(kappa, var(kappa), points used)`.
fn fit_decay(ensemble: &EnsembleResult) -> Option<(f64, f64, usize)> {
    let bloch = ensemble.bloch()?;
    let mut sw = 0.0;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut n = 0usize;
    for (stats, &s) in bloch.iter().zip(ensemble.times_s()) {
        let y = 2.0 * stats.lognorm;
        if !y.is_finite() || !stats.se.is_finite() || stats.se < SE_FLOOR {
            continue;
        }
        let w = 1.0 / (2.0 * stats.se).powi(2);
        sw += w;
        sx += w * s;
        sy += w * y;
        sxx += w * s * s;
        sxy += w * s * y;
        n += 1;
    }
    if n < 3 {
        return None;
    }
    let delta = sw * sxx - sx * sx;
    if delta <= 0.0 {
        return None;
    }
    let slope = (sw * sxy - sx * sy) / delta;
    let var_slope = sw / delta;
    Some((-slope, var_slope, n))
}
