// SPDX-License-Identifier: Apache-2.0

//! Dephasing rate of the alternating (bang-bang) drive versus its
//! frequency, against the constant-drive references `Jt(omega)/2` and
//! `Jt(omega)/4` and the undriven rate `Jt(0)/2`.
//!
//! The square wave only carries odd harmonics of `omega`, so once the
//! drive outruns the noise bandwidth the rate collapses as
//! `gamma_b(omega) = (8/pi^2) sum_n Jt((2n+1) omega)/(2n+1)^2` with every
//! sampled frequency far in the spectral tail.

use std::path::Path;

use anyhow::{Context, Result};

use lindblad_forge::generators::{bb_dephasing_rate, DEFAULT_RATE_TERMS};

use super::{fmt, write_csv, ExperimentOutcome};
use crate::config::{ExperimentConfig, GridSpec};

/// Default sweep over `omega * tau`.
const DEFAULT_GRID: GridSpec = GridSpec { min: 0.5, max: 8.0, points: 31 };
/// The drive must beat the undriven rate by this factor at
/// `omega * tau = 8`.
const SUPPRESSION_FACTOR: f64 = 0.05;

pub fn run(config: &ExperimentConfig, out_dir: &Path, outcome: &mut ExperimentOutcome) -> Result<()> {
    let noise = config
        .noise
        .as_ref()
        .context("noise: section is required for rates-vs-omega")?;
    let model = noise.build()?;
    let tau = model.tau();
    let grid = config.omega_grid.unwrap_or(DEFAULT_GRID);
    check_grid(&grid)?;
    let n_terms = config.n_harmonics.unwrap_or(DEFAULT_RATE_TERMS);

    let j0 = model.spectral_density(0.0);
    let mut rows = Vec::with_capacity(grid.points);
    let mut rates = Vec::with_capacity(grid.points);
    let mut below_constant_everywhere = true;
    for k in 0..grid.points {
        let x = grid.min + (grid.max - grid.min) * k as f64 / (grid.points - 1).max(1) as f64;
        let omega = x / tau;
        let rate = bb_dephasing_rate(&model, omega, n_terms).map_err(|e| anyhow::anyhow!("{e}"))?;
        let jt = model.spectral_density(omega);
        if rate.value >= jt / 4.0 {
            below_constant_everywhere = false;
        }
        rows.push(vec![
            fmt(x),
            fmt(rate.value),
            fmt(jt / 2.0),
            fmt(jt / 4.0),
            fmt(j0 / 2.0),
            fmt(rate.tail_bound),
            rate.terms_used.to_string(),
        ]);
        rates.push(rate.value);
    }
    let path = out_dir.join("rates_vs_omega.csv");
    write_csv(
        &path,
        &[
            "omega_tau",
            "gamma_bb",
            "j_half",
            "j_quarter",
            "undriven",
            "tail_bound",
            "terms_used",
        ],
        &rows,
    )?;
    outcome.artifacts.push(path);

    let decreasing = rates.windows(2).all(|w| w[1] < w[0]);
    outcome.check(
        "bb_rate_strictly_decreasing",
        decreasing,
        format!(
            "{} grid point(s) on omega*tau in [{}, {}]",
            grid.points,
            fmt(grid.min),
            fmt(grid.max)
        ),
    );

    let fast = bb_dephasing_rate(&model, 8.0 / tau, n_terms).map_err(|e| anyhow::anyhow!("{e}"))?;
    outcome.check(
        "high_frequency_suppression",
        fast.value < SUPPRESSION_FACTOR * j0,
        format!(
            "gamma_bb(8/tau) = {} vs {} * Jt(0) = {}",
            fmt(fast.value),
            fmt(SUPPRESSION_FACTOR),
            fmt(SUPPRESSION_FACTOR * j0)
        ),
    );

    // The alternating drive does NOT beat a resonant constant drive
    // pointwise: Jt(omega)/4 dips below gamma_bb once omega leaves the
    // noise bandwidth. Reported for the record, not gated.
    outcome.log(format!(
        "bb rate below Jt(omega)/4 everywhere on the grid: {below_constant_everywhere}"
    ));
    outcome.log(format!("{n_terms} harmonic(s) per rate, tau = {}", fmt(tau)));
    Ok(())
}

pub(super) fn check_grid(grid: &GridSpec) -> Result<()> {
    if !(grid.min > 0.0) || !(grid.max > grid.min) || !grid.min.is_finite() || !grid.max.is_finite()
    {
        anyhow::bail!(
            "omega_grid: need 0 < min < max, got min = {}, max = {}",
            grid.min,
            grid.max
        );
    }
    if grid.points < 2 {
        anyhow::bail!("omega_grid.points: need at least 2, got {}", grid.points);
    }
    Ok(())
}
