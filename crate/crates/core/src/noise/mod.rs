// SPDX-License-Identifier: Apache-2.0

//! Stationary Gaussian noise models.
//!
//! A noise model describes independent, zero-mean, stationary Gaussian
//! processes `xi_alpha(t)` (one per channel) through their common
//! autocorrelation function `J(t) = <xi(t') xi(t' + t)>`. The module
//! provides:
//!
//! - closed-form and quadrature evaluation of the power spectrum
//!   `Jt(omega) = integral e^{i omega t} J(t) dt` (real, even, nonnegative
//!   for a valid process) and of its antisymmetric partner
//!   `Kt(omega) = -2 integral_0^inf J(u) sin(omega u) du` (real, odd);
//! - the running dephasing integral `gamma(t) = 2 integral_0^t J(u) du`;
//! - factorization of the correlation into a convolution square root
//!   `J = j * j` with `jt = +sqrt(Jt)` (real, even `j`);
//! - exact-discretization trajectory samplers.
//!
//! Supported kinds: Ornstein-Uhlenbeck (`J = sigma^2 e^{-|t|/tau}`), damped
//! cosine (`J = sigma^2 e^{-|t|/tau} cos(omega0 t)`), white
//! (`J = J0 delta(t)`), and tabulated (linear interpolation of an even
//! correlation given on a uniform grid).

mod kernel;
mod model;
mod quad;
mod sampler;

pub use kernel::{FactorKernel, KernelGridSpec, KERNEL_HALF_WIDTH_TAUS, KERNEL_MIN_POINTS};
pub use model::{NoiseKind, NoiseModel, NEGATIVE_SPECTRUM_TOL};
pub use quad::adaptive_simpson;
pub use sampler::NoiseSample;
