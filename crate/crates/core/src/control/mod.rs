// SPDX-License-Identifier: Apache-2.0

//! Control schedules and the interaction picture.
//!
//! A control schedule describes the strong, deterministic part of the
//! dynamics through its propagator `V(t)` (satisfying `H_c = i V'(t)
//! V(t)^dagger`). Noise coupling operators are rotated into the interaction
//! picture as
//!
//! ```text
//! H^I(t) = V(t) H V(t)^dagger,     V(t) = exp(-i H_c t) for constant H_c,
//! ```
//!
//! which for `H_c = omega_c S_z` and `H = S_x` gives the rotating coupling
//! `S_x cos(omega_c t) + S_y sin(omega_c t)`. (The opposite ordering
//! `V^dagger H V` would reverse the rotation direction; the convention here
//! is fixed by that reference example and used consistently by the
//! generators and the Monte-Carlo integrator.)
//!
//! For periodic schedules the interaction operator expands in finitely many
//! harmonics of the base frequency,
//!
//! ```text
//! H^I(t) = sum_{omega in F} Ht(omega) e^{-i omega t},
//! Ht(-omega) = Ht(omega)^dagger,
//! ```
//!
//! and [`fourier_data`](ControlSchedule::fourier_data) computes the
//! coefficient set. A schedule is *effective* when every channel's
//! zero-frequency coefficient vanishes: the noise is then echoed away on
//! average and dephasing is governed by the spectrum at the control
//! harmonics instead of at zero frequency.
//!
//! Bang-bang pulses are idealized as instantaneous: `V(t)` jumps between
//! constant segment values. A pulse train may open with a pulse at `t = 0`
//! (e.g. the twelve-segment isotropic sequence starts with `sigma_1`), in
//! which case `V(0^-) = identity` is the physical initial frame.

mod effective;
mod fourier;
mod iso12;
mod schedule;

pub use effective::EffectivenessReport;
pub use fourier::{FourierTerm, StationaryFourierData, COEFF_PRUNE_TOL, PAIRING_TOL};
pub use iso12::{iso12_segment_unitaries, iso12_waveforms};
pub use schedule::{ControlSchedule, ScheduleKind, Segment, DEFAULT_N_HARMONICS};
