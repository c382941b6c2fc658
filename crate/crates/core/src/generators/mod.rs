// SPDX-License-Identifier: Apache-2.0

//! Lindblad generators for weakly driven systems under classical noise.
//!
//! Everything here produces (pieces of) GKLS generators `L` acting on
//! density matrices, `d rho / dt = L rho`, for a system with Hamiltonian
//! `H_c + xi(t) H_alpha` summed over independent noise channels `xi_alpha`.
//! The construction is organized by dynamical regime ([`Regime`]):
//!
//! - [`white_noise_generator`]: delta-correlated noise, where the exact
//!   generator is `-(1/2) sum_ab J_ab ad(H^I_a) ad(H^I_b)` at every instant;
//! - [`commutative_generator`]: a single channel whose interaction-picture
//!   Hamiltonian commutes with itself at all times, where the exact
//!   time-local rate is the running spectral integral `gamma(t)`;
//! - [`finite_eps_generator`] / [`StationaryFiniteEps`]: the second-order
//!   time-dependent family built from convolved noise operators, GKLS at
//!   every instant, for finite weak-coupling parameter;
//! - [`coarse_grained_lindbladian`]: the stationary coarse-grained limit for
//!   periodic controls, assembled from interaction-picture Fourier data and
//!   the noise spectra.
//!
//! [`LindbladParts`] is the common container (Hamiltonian piece, dissipative
//! piece, effective Hamiltonian) with the structural checks — trace
//! preservation, unitality, sign of the dissipative form — used throughout
//! the tests. On top of the raw generators sit closed forms and summaries:
//! dephasing rates under pulsed controls ([`bb_dephasing_rate`],
//! [`iso_dephasing_rate`]), generator bundles for a noisy harmonic mode
//! ([`oscillator_generators`]), and the Ramsey interrogation-time optimum
//! ([`optimal_measurement_time`]).

pub mod coarse;
pub mod commutative;
pub mod finite_eps;
pub mod measurement;
pub mod oscillator;
pub mod parts;
pub mod rates;
pub mod white;

pub use coarse::{coarse_grained_lindbladian, coarse_grained_terms};
pub use commutative::{commutative_generator, commutative_longtime_generator};
pub use finite_eps::{
    average_finite_eps_over_period, finite_eps_generator, finite_eps_generator_with_grid,
    StationaryFiniteEps,
};
pub use measurement::{optimal_measurement_time, ramsey_sensitivity, MeasurementOptimum};
pub use oscillator::{
    ladder_lowering, momentum_operator, oscillator_generators, position_operator,
    OscillatorGenerators, OscillatorKind, MIN_FOCK_DIM,
};
pub use parts::{
    ExportMetadata, GeneratorSpec, LindbladParts, Regime, COMMUTATIVITY_TOL, SPECTRUM_GROUP_TOL,
};
pub use rates::{
    bb_dephasing_rate, iso_dephasing_rate, iso_weight, trigamma, RateSum, DEFAULT_RATE_TERMS,
};
pub use white::white_noise_generator;
