// SPDX-License-Identifier: Apache-2.0

//! Exact generator for a single self-commuting noise direction.
//!
//! When the interaction-picture noise operator commutes with itself at all
//! times (e.g. no control, or control generated by the noise operator
//! itself), the noise average can be done in closed form at every coupling
//! strength. The averaged state satisfies `d rho / dt = G(t) rho` with
//!
//! ```text
//! G(t) = -(gamma(t) / 2) ad(H0)^2,      gamma(t) = 2 integral_0^t J(u) du
//! ```
//!
//! The rate `gamma(t)` is *not* sign-definite for oscillating correlations:
//! the exact dynamics can be transiently non-contractive (coherence revival)
//! even though the long-time limit `gamma(infinity) = Jt(0) >= 0` is a valid
//! Lindblad rate. [`commutative_longtime_generator`] returns that limit.

use crate::error::Result;
use crate::linalg::{ad, superop_compose, HermitianOperator, SuperOperator};
use crate::noise::NoiseModel;

/// Exact instantaneous generator `-(gamma(t)/2) ad(h0)^2` at lab time `t`.
pub fn commutative_generator(
    model: &NoiseModel,
    h0: &HermitianOperator,
    t: f64,
) -> Result<SuperOperator> {
    let gamma = model.gamma_of_t(t)?;
    let squared = superop_compose(&ad(h0), &ad(h0))?;
    Ok(squared.scale(-0.5 * gamma))
}

/// Long-time limit `-(Jt(0)/2) ad(h0)^2` of the commutative generator.
pub fn commutative_longtime_generator(
    model: &NoiseModel,
    h0: &HermitianOperator,
) -> SuperOperator {
    let squared = superop_compose(&ad(h0), &ad(h0)).expect("same operator twice");
    squared.scale(-0.5 * model.spectral_density(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spin_operators;

    /// For the oscillating correlation `J(t) = e^{-|t|} cos(4t)` the running
    /// rate dips negative: `gamma(t) = (2/17)(1 + e^{-t}(4 sin 4t - cos 4t))`
    /// has its minimum at `t = 3 pi / 8`, where
    /// `gamma = (2/17)(1 - 4 e^{-3 pi/8}) ~= -0.0272`. The exact generator
    /// is then expanding along the coherence direction.
    #[test]
    fn oscillating_correlation_gives_transient_expansion() {
        let model = NoiseModel::damped_cosine(1.0, 1.0, 4.0).unwrap();
        let [_, _, sz] = spin_operators(0.5).unwrap();
        let t_min = 3.0 * std::f64::consts::PI / 8.0;

        let gamma = model.gamma_of_t(t_min).unwrap();
        let expect = (2.0 / 17.0) * (1.0 - 4.0 * (-t_min).exp());
        assert!((gamma - expect).abs() < 1e-7, "gamma={gamma} vs {expect}");
        assert!(gamma < -0.027);

        let g = commutative_generator(&model, &sz, t_min).unwrap();
        let max_re = g
            .spectrum()
            .unwrap()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max);
        // ad(Sz)^2 has eigenvalue 1 on the coherences, so the top rate is
        // -gamma/2 > 0: transient expansion.
        assert!((max_re + 0.5 * gamma).abs() < 1e-9);
        assert!(max_re > 0.013);
    }

    /// The long-time generator matches the running generator once the
    /// correlation has decayed.
    #[test]
    fn longtime_limit_matches_late_running_rate() {
        let model = NoiseModel::ou(0.9, 0.7).unwrap();
        let [_, _, sz] = spin_operators(0.5).unwrap();
        let late = commutative_generator(&model, &sz, 80.0 * 0.7).unwrap();
        let limit = commutative_longtime_generator(&model, &sz);
        let diff = late.sub(&limit).unwrap();
        assert!(diff.frobenius_norm() < 1e-9);
        // And the limit rate is Jt(0) = 2 sigma^2 tau.
        let expect_rate = 2.0 * 0.9 * 0.9 * 0.7;
        assert!((model.spectral_density(0.0) - expect_rate).abs() < 1e-12);
    }
}
