// SPDX-License-Identifier: Apache-2.0

//! Factorization of the correlation into a convolution square root.
//!
//! Every valid stationary correlation can be written as `J = j * j`
//! (convolution) with a real, even kernel `j` whose Fourier transform is
//! `jt = +sqrt(Jt) >= 0`; that sign choice fixes the phase freedom in the
//! factorization. The kernel is tabulated on a uniform symmetric grid and
//! reconstructed from the spectrum by a discrete cosine sum at the grid's
//! natural frequencies, which makes the *discrete* self-convolution of `j`
//! reproduce `J` up to aliasing and periodization error only.

use serde::{Deserialize, Serialize};

use super::model::{NoiseKind, NoiseModel};
use crate::error::{Error, Result};

/// Default grid extent in units of the correlation time: the kernel decays
/// on the scale of `tau`, and `+-8 tau` keeps the truncation error safely
/// below the factorization tolerance.
pub const KERNEL_HALF_WIDTH_TAUS: f64 = 8.0;

/// Minimum admissible number of grid points.
pub const KERNEL_MIN_POINTS: usize = 512;

/// Grid request for [`NoiseModel::factor_kernel`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelGridSpec {
    /// Half-width `L` of the symmetric grid `[-L, L)`. `None` selects
    /// `8 tau` (or 1.0 for white noise, where the kernel is a point mass
    /// and the extent is immaterial).
    pub half_width: Option<f64>,
    /// Number of uniformly spaced points (must be even and at least
    /// [`KERNEL_MIN_POINTS`]).
    pub n_points: usize,
}

impl Default for KernelGridSpec {
    fn default() -> Self {
        Self {
            half_width: None,
            n_points: 1024,
        }
    }
}

/// The factorization kernel `j` tabulated on a uniform symmetric grid
/// `t_k = -L + k dt`, `k = 0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorKernel {
    dt: f64,
    half_width: f64,
    values: Vec<f64>,
}

impl NoiseModel {
    /// Tabulate the convolution square root `j` of this model's
    /// correlation on a uniform grid (see [`FactorKernel`]).
    ///
    /// For the white kind the kernel is a discrete delta: a single center
    /// cell of weight `sqrt(J0)` (value `sqrt(J0)/dt`).
    pub fn factor_kernel(&self, spec: KernelGridSpec) -> Result<FactorKernel> {
        let n = spec.n_points;
        if n < KERNEL_MIN_POINTS || n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "kernel grid needs an even point count >= {KERNEL_MIN_POINTS}, got {n}"
            )));
        }
        let half_width = match spec.half_width {
            Some(l) if l.is_finite() && l > 0.0 => l,
            Some(l) => {
                return Err(Error::InvalidParameter(format!(
                    "kernel grid half-width must be positive, got {l}"
                )))
            }
            None => {
                if self.kind() == NoiseKind::White {
                    1.0
                } else {
                    KERNEL_HALF_WIDTH_TAUS * self.tau()
                }
            }
        };
        let dt = 2.0 * half_width / n as f64;

        if self.kind() == NoiseKind::White {
            let mut values = vec![0.0; n];
            values[n / 2] = self.white_strength().sqrt() / dt;
            return Ok(FactorKernel {
                dt,
                half_width,
                values,
            });
        }

        // Spectrum at the grid's natural frequencies omega_m = 2 pi m / (n dt).
        let d_omega = 2.0 * std::f64::consts::PI / (n as f64 * dt);
        let mut jt = Vec::with_capacity(n / 2 + 1);
        let mut worst_negative: f64 = 0.0;
        for m in 0..=n / 2 {
            let v = self.spectral_density(d_omega * m as f64);
            worst_negative = worst_negative.min(v);
            jt.push(v.max(0.0).sqrt());
        }
        let scale = jt.iter().map(|v| v * v).fold(0.0, f64::max).max(1.0);
        if worst_negative < super::model::NEGATIVE_SPECTRUM_TOL * scale {
            return Err(Error::InvalidNoiseModel(format!(
                "power spectrum reaches {worst_negative:.3e} on the kernel \
                 grid; cannot factor a non-positive-definite correlation"
            )));
        }

        // Inverse cosine reconstruction: j real and even, sampled at
        // t_k = -L + k dt.
        let mut values = vec![0.0; n];
        let norm = 1.0 / (n as f64 * dt);
        for (k, value) in values.iter_mut().enumerate() {
            let t = -half_width + dt * k as f64;
            let mut acc = jt[0];
            for (m, jtm) in jt.iter().enumerate().skip(1) {
                let weight = if m == n / 2 { 1.0 } else { 2.0 };
                acc += weight * jtm * (d_omega * m as f64 * t).cos();
            }
            *value = acc * norm;
        }
        Ok(FactorKernel {
            dt,
            half_width,
            values,
        })
    }
}

impl FactorKernel {
    /// Grid spacing.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Grid half-width `L`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Kernel values at `t_k = -L + k dt`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Grid times `t_k = -L + k dt`.
    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len())
            .map(|k| -self.half_width + self.dt * k as f64)
            .collect()
    }

    /// Fourier transform `jt(omega) = dt * sum_k j(t_k) cos(omega t_k)`
    /// (trapezoid on the periodic grid).
    pub fn j_tilde(&self, omega: f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let t = -self.half_width + self.dt * k as f64;
                v * (omega * t).cos()
            })
            .sum::<f64>()
            * self.dt
    }

    /// Discrete (circular) self-convolution `(j * j)(t_k)` on the grid.
    pub fn self_convolution(&self) -> Vec<f64> {
        let n = self.values.len();
        let mut out = vec![0.0; n];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (l, vl) in self.values.iter().enumerate() {
                // t_k - t_l = (k - l) dt lives at periodic index
                // (k - l + n/2) mod n.
                let idx = (k + n + n / 2 - l) % n;
                acc += vl * self.values[idx];
            }
            *slot = acc * self.dt;
        }
        out
    }

    /// Relative L2 error of the discrete self-convolution against the
    /// model correlation sampled on the same grid.
    pub fn self_convolution_error(&self, model: &NoiseModel) -> f64 {
        let conv = self.self_convolution();
        let n = self.values.len();
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, c) in conv.iter().enumerate() {
            let t = -self.half_width + self.dt * k as f64;
            let j = if model.kind() == NoiseKind::White {
                // Discrete delta of weight J0.
                if k == n / 2 {
                    model.white_strength() / self.dt
                } else {
                    0.0
                }
            } else {
                model.correlation(t)
            };
            num += (c - j) * (c - j);
            den += j * j;
        }
        (num / den.max(1e-300)).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ou_kernel_is_even_and_reproduces_correlation() {
        let model = NoiseModel::ou(1.0, 1.0).unwrap();
        let kernel = model.factor_kernel(KernelGridSpec::default()).unwrap();
        let v = kernel.values();
        let n = v.len();
        // Even: j(t_k) = j(-t_k); grid index n-k mirrors k around center.
        for k in 1..n / 2 {
            assert!((v[k] - v[n - k]).abs() < 1e-10 * v[n / 2].abs().max(1.0));
        }
        assert!(kernel.self_convolution_error(&model) < 2e-3);
    }

    #[test]
    fn white_kernel_is_single_cell_delta() {
        let model = NoiseModel::white(0.49).unwrap();
        let kernel = model.factor_kernel(KernelGridSpec::default()).unwrap();
        let v = kernel.values();
        let n = v.len();
        for (k, x) in v.iter().enumerate() {
            if k == n / 2 {
                assert!((x - 0.7 / kernel.dt()).abs() < 1e-12);
            } else {
                assert_eq!(*x, 0.0);
            }
        }
        assert!(kernel.self_convolution_error(&model) < 1e-12);
    }

    #[test]
    fn kernel_spectrum_matches_sqrt_of_model_spectrum() {
        let model = NoiseModel::ou(0.5, 2.0).unwrap();
        let kernel = model
            .factor_kernel(KernelGridSpec {
                half_width: None,
                n_points: 2048,
            })
            .unwrap();
        for &w in &[0.0, 0.3, 1.0, 2.5] {
            let expect = model.spectral_density(w).sqrt();
            let got = kernel.j_tilde(w);
            assert!(
                (got - expect).abs() < 2e-3 * expect.max(1.0),
                "omega={w}: {got} vs {expect}"
            );
        }
    }
}
