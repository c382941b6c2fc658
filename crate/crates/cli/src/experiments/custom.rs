// SPDX-License-Identifier: Apache-2.0

//! Free-form run: one Monte-Carlo ensemble for the configured noise,
//! control, and couplings, compared point-by-point against the
//! coarse-grained generator's prediction.
//!
//! Structural guarantees are gated (exact unitarity of every trajectory,
//! matching save grids); the physics-level agreement is reported, not
//! gated, because its size is governed by the configured `eps` and
//! trajectory count rather than by correctness of the implementation.

use std::path::Path;

use anyhow::Result;

use lindblad_forge::control::ScheduleKind;
use lindblad_forge::generators::coarse_grained_lindbladian;
use lindblad_forge::montecarlo::{
    compare, evolve_generator, run_ensemble, GeneratorFamily, UNITARITY_DRIFT_TOL,
};

use super::{fmt, write_csv, ExperimentOutcome};
use crate::config::ExperimentConfig;

/// Harmonic truncation per schedule kind when the config does not pin one:
/// a drift-free schedule has a single coefficient, a constant drive is
/// band-limited on a qubit, and square waves carry a slow `1/k` tail.
fn default_harmonics(kind: ScheduleKind) -> usize {
    match kind {
        ScheduleKind::None => 1,
        ScheduleKind::Constant => 4,
        _ => 41,
    }
}

pub fn run(config: &ExperimentConfig, out_dir: &Path, outcome: &mut ExperimentOutcome) -> Result<()> {
    let sim_config = config.build_sim_config()?;
    let ensemble = run_ensemble(&sim_config).map_err(|e| anyhow::anyhow!("{e}"))?;
    for w in ensemble.warnings() {
        outcome.log(format!("sampler: {w}"));
    }

    let n_harmonics = config
        .n_harmonics
        .unwrap_or_else(|| default_harmonics(sim_config.schedule().kind()));
    let fourier = sim_config
        .schedule()
        .fourier_data(sim_config.ops(), n_harmonics)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let parts = coarse_grained_lindbladian(&fourier, sim_config.model())
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let total = parts.total();
    let predicted = evolve_generator(
        &GeneratorFamily::Constant(&total),
        sim_config.rho0(),
        ensemble.times_t(),
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let report = compare(&ensemble, &predicted).map_err(|e| anyhow::anyhow!("{e}"))?;

    let ensemble_path = out_dir.join("ensemble.csv");
    ensemble.write_csv(&ensemble_path).map_err(|e| anyhow::anyhow!("{e}"))?;
    outcome.artifacts.push(ensemble_path);
    let sidecar_path = out_dir.join("ensemble.json");
    ensemble
        .write_json_sidecar(&sidecar_path)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    outcome.artifacts.push(sidecar_path);

    let rows: Vec<Vec<String>> = report
        .rows()
        .iter()
        .map(|r| {
            vec![
                fmt(r.s),
                fmt(r.t),
                fmt(r.purity_mc),
                fmt(r.purity_predicted),
                fmt(r.purity_se),
                fmt(r.z_purity),
                fmt(r.trace_distance),
                r.bloch_gap.map(fmt).unwrap_or_default(),
            ]
        })
        .collect();
    let comparison_path = out_dir.join("comparison.csv");
    write_csv(
        &comparison_path,
        &[
            "s",
            "t",
            "purity_mc",
            "purity_predicted",
            "purity_se",
            "z_purity",
            "trace_distance",
            "bloch_gap",
        ],
        &rows,
    )?;
    outcome.artifacts.push(comparison_path);

    outcome.check(
        "trajectory_unitarity",
        ensemble.max_unitarity_defect() < UNITARITY_DRIFT_TOL,
        format!(
            "max |U+U - 1| = {:.3e} across {} trajectories",
            ensemble.max_unitarity_defect(),
            sim_config.n_traj()
        ),
    );
    outcome.check(
        "prediction_covers_save_grid",
        report.rows().len() == ensemble.times_s().len() && !report.rows().is_empty(),
        format!("{} compared instant(s)", report.rows().len()),
    );
    outcome.log(format!(
        "comparison: mean z^2 = {:.4} over {} scored point(s), max trace distance {:.5}",
        report.score(),
        report.n_scored(),
        report.max_trace_distance()
    ));
    outcome.log(format!(
        "coarse generator: {n_harmonics} harmonic(s), coarse rate {} per unit lab time",
        fmt(sim_config.coarse_rate())
    ));
    Ok(())
}
