// SPDX-License-Identifier: Apache-2.0

//! Experiment drivers and their shared artifact plumbing.
//!
//! Every experiment produces, inside its output directory:
//! - one or more CSV data files (UTF-8, header row, `.` decimal, ready
//!   for gnuplot),
//! - `summary.json` with a machine-readable pass/fail per check,
//! - `run.log` with the human-readable narrative.
//!
//! Artifacts carry no timestamps and all reductions are order-fixed, so
//! a rerun of the same config is byte-identical.

mod custom;
mod fig_compare;
mod gamma_of_t;
mod iso12;
mod oscillator;
mod rates_vs_omega;
mod spectra;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::ExperimentConfig;

/// One named pass/fail verdict with a human-readable detail string.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.into(), passed, detail }
    }
}

/// Everything an experiment hands back for reporting.
#[derive(Debug, Default)]
pub struct ExperimentOutcome {
    pub name: String,
    pub checks: Vec<Check>,
    pub artifacts: Vec<PathBuf>,
    pub log: Vec<String>,
}

impl ExperimentOutcome {
    fn new(name: &str) -> Self {
        Self { name: name.into(), ..Self::default() }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `PASS name: detail` / `FAIL name: detail` lines for the terminal
    /// and the log file.
    pub fn check_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                )
            })
            .collect()
    }

    fn log(&mut self, line: impl Into<String>) {
        self.log.push(line.into());
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check::new(name, passed, detail));
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    experiment: &'a str,
    all_passed: bool,
    checks: &'a [Check],
    artifacts: Vec<String>,
}

/// Dispatch on the experiment name, then write `summary.json` and
/// `run.log` next to the experiment's data files.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<ExperimentOutcome> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    let mut outcome = ExperimentOutcome::new(&config.experiment);
    match config.experiment.as_str() {
        "gamma-of-t" => gamma_of_t::run(config, out_dir, &mut outcome)?,
        "rates-vs-omega" => rates_vs_omega::run(config, out_dir, &mut outcome)?,
        "fig-compare" => fig_compare::run(config, out_dir, &mut outcome)?,
        "spectra" => spectra::run(config, out_dir, &mut outcome)?,
        "iso12" => iso12::run(config, out_dir, &mut outcome)?,
        "oscillator" => oscillator::run(config, out_dir, &mut outcome)?,
        "custom" => custom::run(config, out_dir, &mut outcome)?,
        other => anyhow::bail!("experiment: unknown name {other:?}"),
    }
    write_summary(out_dir, &mut outcome)?;
    write_log(out_dir, &mut outcome)?;
    Ok(outcome)
}

fn write_summary(out_dir: &Path, outcome: &mut ExperimentOutcome) -> Result<()> {
    let path = out_dir.join("summary.json");
    let summary = Summary {
        experiment: &outcome.name,
        all_passed: outcome.all_passed(),
        checks: &outcome.checks,
        artifacts: outcome
            .artifacts
            .iter()
            .map(|p| {
                p.file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| p.display().to_string())
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    std::fs::write(&path, text)
        .with_context(|| format!("cannot write {}", path.display()))?;
    outcome.artifacts.push(path);
    Ok(())
}

fn write_log(out_dir: &Path, outcome: &mut ExperimentOutcome) -> Result<()> {
    let path = out_dir.join("run.log");
    let mut text = String::new();
    writeln!(text, "experiment: {}", outcome.name)?;
    for line in &outcome.log {
        writeln!(text, "{line}")?;
    }
    for line in outcome.check_lines() {
        writeln!(text, "{line}")?;
    }
    writeln!(
        text,
        "result: {}",
        if outcome.all_passed() { "all checks passed" } else { "some checks FAILED" }
    )?;
    std::fs::write(&path, text)
        .with_context(|| format!("cannot write {}", path.display()))?;
    outcome.artifacts.push(path);
    Ok(())
}

/// Write a CSV file with a header row; all cells are preformatted
/// strings so the byte stream is fully determined by the caller.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Shortest-roundtrip decimal form; `Display` for `f64` is deterministic
/// across platforms, which keeps reruns byte-identical.
pub fn fmt(x: f64) -> String {
    format!("{x}")
}
