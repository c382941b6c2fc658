// SPDX-License-Identifier: Apache-2.0

//! Monte-Carlo validation of the coarse-grained generators.
//!
//! The reduced dynamics predicted by the generator modules can be checked
//! directly: draw classical noise trajectories, integrate the Schrödinger
//! equation for each realization, average the resulting pure-state density
//! matrices, and compare the ensemble mean against the deterministic
//! prediction on the coarse time grid.
//!
//! The pieces are:
//!
//! - [`SimConfig`]: validated bundle of schedule, noise model, coupling
//!   operators, initial state, grids, and seeds;
//! - [`run_trajectory`]: one unitary realization on the fine grid with
//!   unitarity monitoring ([`TrajectoryPath`]);
//! - [`run_ensemble`]: seed-derived parallel ensemble with jackknife error
//!   bars and a bit-stable reduction ([`EnsembleResult`]);
//! - [`evolve_generator`]: deterministic propagation of a generator family
//!   on the same save grid;
//! - [`compare`]: per-time deviation report between the two
//!   ([`ComparisonReport`]).

mod compare;
mod config;
mod ensemble;
mod evolve;
mod trajectory;

pub use compare::{compare, ComparisonReport, ComparisonRow};
pub use config::{SimConfig, MAX_OMEGA_C_DT, MIN_TAU_OVER_DT};
pub use ensemble::{run_ensemble, BlochStats, EnsembleResult};
pub use evolve::{evolve_generator, GeneratorFamily};
pub use trajectory::{run_trajectory, TrajectoryPath, UNITARITY_DRIFT_TOL};
