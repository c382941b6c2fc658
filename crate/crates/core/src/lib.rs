// SPDX-License-Identifier: Apache-2.0

//! Lindblad generators for controlled stochastic Hamiltonians, with
//! Monte-Carlo cross-validation.
//!
//! The crate models qubits, spins, and truncated oscillators driven by a
//! classical Gaussian noise process `xi(t)` coupled through Hermitian
//! operators, optionally steered by a periodic control Hamiltonian. In the
//! weak-coupling regime the ensemble-averaged dynamics is Markovian on a
//! coarse time scale, and the crate constructs the corresponding Lindblad
//! generators in several regimes:
//!
//! - **white**: delta-correlated noise, where the generator is exact at all
//!   couplings;
//! - **commutative**: interaction Hamiltonians that commute at different
//!   times, where the exact generator has a time-dependent rate given by the
//!   running integral of the correlation function;
//! - **finite-eps**: the time-dependent dissipator built from the factored
//!   correlation kernel, keeping finite-coupling corrections;
//! - **coarse-grained**: the stationary generator obtained by averaging over
//!   a control period, expressed through the noise power spectrum sampled at
//!   the control harmonics.
//!
//! Alongside the generators, [`montecarlo`] integrates the underlying
//! stochastic Schroedinger dynamics trajectory-by-trajectory so that every
//! analytic prediction can be checked against a direct simulation of the
//! same model, and [`noise`] provides the colored-noise models (sampling,
//! spectra, kernel factorization) shared by both sides of the comparison.

pub mod control;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod montecarlo;
pub mod noise;
pub mod rng;

pub use error::{Error, Result};
