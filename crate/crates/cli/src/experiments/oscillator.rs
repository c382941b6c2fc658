// SPDX-License-Identifier: Apache-2.0

//! Stationary generators for a noisy harmonic mode in both coupling
//! layouts: quadrature (linear) noise and squared-quadrature (frequency)
//! noise.
//!
//! The linear layout must reduce to balanced damping/diffusion of `x` and
//! `p` at the resonant rate `Jt(omega_c)`; the frequency layout splits
//! into number dephasing at `Jt(0)`, a two-photon parametric dissipator
//! at `Jt(2 omega_c)`, and a frequency pull. Checks pin the balanced rate
//! matrix, trace preservation, the sign of the dissipative form, and that
//! the number-dephasing piece conserves occupation.

use std::path::Path;

use anyhow::{Context, Result};

use lindblad_forge::generators::{oscillator_generators, OscillatorGenerators, OscillatorKind};
use lindblad_forge::linalg::{superop_spectrum, C64, CMat};

use super::{fmt, write_csv, ExperimentOutcome};
use crate::config::ExperimentConfig;

const DEFAULT_N_FOCK: usize = 12;
/// Absolute tolerance (relative to the resonant rate) on structural
/// identities that hold exactly in the closed forms.
const STRUCT_TOL: f64 = 1e-8;

pub fn run(config: &ExperimentConfig, out_dir: &Path, outcome: &mut ExperimentOutcome) -> Result<()> {
    let noise = config
        .noise
        .as_ref()
        .context("noise: section is required for oscillator")?;
    let model = noise.build()?;
    let model = match model.channels() {
        2 => model,
        1 => {
            outcome.log("noise.channels = 1 promoted to 2 (one per quadrature)".to_string());
            model.with_channels(2).map_err(|e| anyhow::anyhow!("{e}"))?
        }
        n => anyhow::bail!("noise.channels: the oscillator needs 1 or 2 channels, got {n}"),
    };
    let tau = config.time_unit();
    let omega_c = config
        .control
        .as_ref()
        .and_then(|c| c.omega_c_tau)
        .context("control.omega_c_tau: required for oscillator")?
        / tau;
    let n_fock = config.n_fock.unwrap_or(DEFAULT_N_FOCK);

    let linear = oscillator_generators(OscillatorKind::Linear, n_fock, &model, omega_c)
        .map_err(|e| anyhow::anyhow!("linear layout: {e}"))?;
    let frequency = oscillator_generators(OscillatorKind::Frequency, n_fock, &model, omega_c)
        .map_err(|e| anyhow::anyhow!("frequency layout: {e}"))?;

    // Two i.i.d. channels damp both quadratures at the resonant spectral
    // density, with no cross term: Gamma = diag(Jt(omega_c), Jt(omega_c))
    // in the quadratic-form convention -(1/2) sum Gamma_jk ad(c_j) ad(c_k).
    let j_res = model.spectral_density(omega_c);
    let gamma = linear
        .linear_gamma_matrix()
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let balanced = (gamma[(0, 0)] - j_res).abs().max((gamma[(1, 1)] - j_res).abs()) / j_res
        < STRUCT_TOL
        && gamma[(0, 1)].abs().max(gamma[(1, 0)].abs()) < STRUCT_TOL * j_res;
    outcome.check(
        "linear_damping_balanced",
        balanced,
        format!(
            "quadrature rate matrix diag ({}, {}) vs Jt(omega_c) = {}",
            fmt(gamma[(0, 0)]),
            fmt(gamma[(1, 1)]),
            fmt(j_res)
        ),
    );

    let mut rows = Vec::new();
    for (label, gen) in [("linear", &linear), ("frequency", &frequency)] {
        let defect = gen.parts().trace_preservation_defect();
        outcome.check(
            &format!("{label}_trace_preserving"),
            defect < STRUCT_TOL,
            format!("adjoint-identity residual {defect:.3e}"),
        );
        let max_eig = gen
            .parts()
            .dissipative_form_max_eigenvalue()
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        outcome.check(
            &format!("{label}_dissipative_form"),
            max_eig <= STRUCT_TOL * j_res.max(1.0),
            format!("largest symmetrized dissipator eigenvalue {max_eig:.3e}"),
        );
        let spectrum = superop_spectrum(&gen.parts().total()).map_err(|e| anyhow::anyhow!("{e}"))?;
        let max_re = spectrum.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        outcome.check(
            &format!("{label}_spectrum_stable"),
            max_re <= STRUCT_TOL * j_res.max(1.0),
            format!("max Re(eigenvalue) = {max_re:.3e} over {} eigenvalue(s)", spectrum.len()),
        );
        for (i, z) in spectrum.iter().enumerate() {
            rows.push(vec![label.to_string(), i.to_string(), fmt(z.re), fmt(z.im)]);
        }
    }

    outcome.check(
        "number_dephasing_conserves_occupation",
        occupation_leak(&frequency)? < STRUCT_TOL * model.spectral_density(0.0).max(1.0),
        "tr(n D0(rho)) over a basis of test states".to_string(),
    );

    let path = out_dir.join("oscillator.csv");
    write_csv(&path, &["layout", "index", "eigenvalue_re", "eigenvalue_im"], &rows)?;
    outcome.artifacts.push(path);
    outcome.log(format!(
        "n_fock = {n_fock}, omega_c = {}, Jt(0) = {}, Jt(omega_c) = {}, Jt(2 omega_c) = {}",
        fmt(omega_c),
        fmt(model.spectral_density(0.0)),
        fmt(j_res),
        fmt(model.spectral_density(2.0 * omega_c))
    ));
    Ok(())
}

/// Largest `|tr(n D0(rho))|` over a set of deterministic test states,
/// where `D0` is the zero-frequency (number-dephasing) dissipator of the
/// frequency layout. Number dephasing commutes with `n`, so occupation
/// must be exactly conserved.
fn occupation_leak(gen: &OscillatorGenerators) -> Result<f64> {
    let d = gen.n_fock();
    let mut worst = 0.0f64;
    for k in 0..3 {
        // Dense Hermitian test states with off-diagonal phase structure
        // varying by k.
        let rho = CMat::from_shape_fn((d, d), |(i, j)| {
            let phase = (k + 1) as f64 * 0.37 * (i as f64 - j as f64);
            let amp = (-0.5 * (i as f64 - j as f64).powi(2) / 4.0).exp() / d as f64;
            C64::new(amp * phase.cos(), amp * phase.sin())
        });
        let image = gen
            .zero_frequency_dissipator()
            .apply(&rho)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let leak: C64 = image
            .diag()
            .indexed_iter()
            .map(|(i, z)| *z * i as f64)
            .sum();
        worst = worst.max(leak.norm());
    }
    Ok(worst)
}
