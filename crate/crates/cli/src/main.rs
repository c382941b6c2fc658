// SPDX-License-Identifier: Apache-2.0

//! `forge`: reproducible experiment driver for the coarse-graining toolkit.
//!
//! Subcommands:
//! - `forge run <config> [--check] [--seed N] [--out DIR]` runs one
//!   experiment and writes its CSV data, `summary.json`, and `run.log`;
//! - `forge validate <config>` builds everything without running;
//! - `forge spectra --spin S` prints commutator spectra tables.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid config,
//! 3 failed checks under `--check`. The `FORGE_THREADS` environment
//! variable caps the worker thread count; artifacts are byte-identical
//! across reruns and thread counts.

mod config;
mod experiments;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::ExperimentConfig;

const EXIT_INTERNAL: u8 = 1;
const EXIT_INVALID_CONFIG: u8 = 2;
const EXIT_FAILED_CHECKS: u8 = 3;

#[derive(Parser)]
#[command(
    name = "forge",
    version,
    about = "Coarse-grained open-system dynamics under fast control drives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write its artifacts.
    Run {
        /// Path to a JSON experiment config.
        config: PathBuf,
        /// Exit with code 3 if any experiment check fails.
        #[arg(long)]
        check: bool,
        /// Override the RNG seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a config (structure and physics) without running it.
    Validate {
        /// Path to a JSON experiment config.
        config: PathBuf,
    },
    /// Write commutator spectra tables for a given spin.
    Spectra {
        /// Spin quantum number (positive integer or half-integer).
        #[arg(long)]
        spin: f64,
        /// Output directory (defaults to `out/spectra`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_thread_pool() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_INTERNAL);
    }
    match cli.command {
        Command::Run { config, check, seed, out } => run(&config, check, seed, out),
        Command::Validate { config } => validate(&config),
        Command::Spectra { spin, out } => spectra(spin, out),
    }
}

/// Honor `FORGE_THREADS` before any parallel region spins up the default
/// global pool.
fn init_thread_pool() -> Result<()> {
    let Ok(raw) = std::env::var("FORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .with_context(|| format!("FORGE_THREADS: expected a positive integer, got {raw:?}"))?;
    if n == 0 {
        anyhow::bail!("FORGE_THREADS: expected a positive integer, got 0");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("FORGE_THREADS: cannot configure the thread pool")
}

fn run(path: &PathBuf, check: bool, seed: Option<u64>, out: Option<PathBuf>) -> ExitCode {
    let mut config = match ExperimentConfig::load(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("invalid config: {e:#}");
            return ExitCode::from(EXIT_INVALID_CONFIG);
        }
    };
    if let Some(seed) = seed {
        match &mut config.sim {
            Some(sim) => sim.seed = seed,
            None => {
                eprintln!("invalid config: --seed given but the config has no sim section");
                return ExitCode::from(EXIT_INVALID_CONFIG);
            }
        }
    }
    if let Err(e) = config.validate() {
        eprintln!("invalid config: {e:#}");
        return ExitCode::from(EXIT_INVALID_CONFIG);
    }
    let out_dir = out
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&config.experiment));
    let outcome = match experiments::run_experiment(&config, &out_dir) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    for line in outcome.check_lines() {
        println!("{line}");
    }
    println!(
        "wrote {} artifact(s) to {}",
        outcome.artifacts.len(),
        out_dir.display()
    );
    if check && !outcome.all_passed() {
        return ExitCode::from(EXIT_FAILED_CHECKS);
    }
    ExitCode::SUCCESS
}

fn validate(path: &PathBuf) -> ExitCode {
    let report = ExperimentConfig::load(path).and_then(|c| c.validate());
    match report {
        Ok(report) => {
            // Serializing a plain struct cannot fail; surface it as an
            // internal error if it ever does.
            match serde_json::to_string_pretty(&report) {
                Ok(text) => {
                    println!("{text}");
                    println!("config ok");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_INTERNAL)
                }
            }
        }
        Err(e) => {
            eprintln!("invalid config: {e:#}");
            ExitCode::from(EXIT_INVALID_CONFIG)
        }
    }
}

fn spectra(spin: f64, out: Option<PathBuf>) -> ExitCode {
    if let Err(e) = config::check_spin(spin) {
        eprintln!("invalid config: {e:#}");
        return ExitCode::from(EXIT_INVALID_CONFIG);
    }
    let config = ExperimentConfig {
        experiment: "spectra".into(),
        output_dir: None,
        noise: None,
        control: None,
        sim: None,
        coupling: None,
        rho0: None,
        spin: Some(spin),
        n_fock: None,
        omega_grid: None,
        n_harmonics: None,
    };
    let out_dir = out.unwrap_or_else(|| PathBuf::from("out").join("spectra"));
    match experiments::run_experiment(&config, &out_dir) {
        Ok(outcome) => {
            for line in outcome.check_lines() {
                println!("{line}");
            }
            println!("wrote {} artifact(s) to {}", outcome.artifacts.len(), out_dir.display());
            if outcome.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED_CHECKS)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
