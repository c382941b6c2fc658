// SPDX-License-Identifier: Apache-2.0

//! Commutator spectra for spin operators, checked against closed forms.
//!
//! For spin `S` on the `(2S+1)`-dimensional space, with `ad(A) = [A, .]`:
//! - `ad(S_z)` has integer eigenvalues `m` for `m = -2S..2S`, each with
//!   multiplicity `2S + 1 - |m|` (differences of the `S_z` levels);
//! - `sum_a ad(S_a)^2` is the quadratic Casimir of the adjoint action:
//!   eigenvalues `j(j+1)` with multiplicity `2j+1` for `j = 0..2S`;
//! - `ad(S_x)^2 + ad(S_y)^2` resolves each adjoint multiplet further into
//!   `j(j+1) - m^2` for `m = -j..j`.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;

use lindblad_forge::linalg::{
    ad, group_spectrum, spin_operators, superop_compose, superop_spectrum, SpectralCluster,
    SuperOperator,
};

use super::{fmt, write_csv, ExperimentOutcome};
use crate::config::{check_spin, ExperimentConfig};

/// Clusters and closed-form values match to this absolute tolerance.
const SPECTRUM_TOL: f64 = 1e-8;

pub fn run(config: &ExperimentConfig, out_dir: &Path, outcome: &mut ExperimentOutcome) -> Result<()> {
    let spins: Vec<f64> = match config.spin {
        Some(s) => {
            check_spin(s)?;
            vec![s]
        }
        None => vec![0.5, 1.0, 1.5],
    };

    let mut rows: Vec<Vec<String>> = Vec::new();
    for &s in &spins {
        let [sx, sy, sz] = spin_operators(s).map_err(|e| anyhow::anyhow!("spin {s}: {e}"))?;
        let ad_z = ad(&sz);
        let xx = superop_compose(&ad(&sx), &ad(&sx)).map_err(|e| anyhow::anyhow!("{e}"))?;
        let yy = superop_compose(&ad(&sy), &ad(&sy)).map_err(|e| anyhow::anyhow!("{e}"))?;
        let zz = superop_compose(&ad_z, &ad_z).map_err(|e| anyhow::anyhow!("{e}"))?;
        let planar = xx.add(&yy).map_err(|e| anyhow::anyhow!("{e}"))?;
        let casimir = planar.add(&zz).map_err(|e| anyhow::anyhow!("{e}"))?;

        let cases: [(&str, &SuperOperator, Vec<(i64, usize)>); 3] = [
            ("ad_z", &ad_z, predicted_ad_z(s)),
            ("sum_xyz_sq", &casimir, predicted_casimir(s)),
            ("sum_xy_sq", &planar, predicted_planar(s)),
        ];
        for (label, op, predicted) in cases {
            let clusters = clustered(op)?;
            let ok = clusters_match(&clusters, &predicted);
            for (i, c) in clusters.iter().enumerate() {
                let (pv, pm) = predicted
                    .get(i)
                    .map(|&(v, m)| (fmt(v as f64), m.to_string()))
                    .unwrap_or_else(|| (String::new(), String::new()));
                rows.push(vec![
                    fmt(s),
                    label.to_string(),
                    fmt(c.value.re),
                    fmt(c.value.im),
                    c.multiplicity.to_string(),
                    pv,
                    pm,
                ]);
            }
            outcome.check(
                &format!("{label}_spectrum_spin_{s}"),
                ok,
                format!(
                    "{} cluster(s) vs {} predicted, tolerance {SPECTRUM_TOL:.0e}",
                    clusters.len(),
                    predicted.len()
                ),
            );
        }
        outcome.log(format!("spin {s}: dim {}", sx.dim()));
    }

    let path = out_dir.join("spectra.csv");
    write_csv(
        &path,
        &[
            "spin",
            "operator",
            "eigenvalue_re",
            "eigenvalue_im",
            "multiplicity",
            "predicted",
            "predicted_multiplicity",
        ],
        &rows,
    )?;
    outcome.artifacts.push(path);
    Ok(())
}

/// Compute, cluster (descending real part), and sanity-check a spectrum.
fn clustered(op: &SuperOperator) -> Result<Vec<SpectralCluster>> {
    let values = superop_spectrum(op).map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(group_spectrum(&values, SPECTRUM_TOL))
}

fn clusters_match(clusters: &[SpectralCluster], predicted: &[(i64, usize)]) -> bool {
    clusters.len() == predicted.len()
        && clusters.iter().zip(predicted).all(|(c, &(v, m))| {
            c.multiplicity == m
                && (c.value.re - v as f64).abs() < SPECTRUM_TOL
                && c.value.im.abs() < SPECTRUM_TOL
        })
}

/// Descending `(eigenvalue, multiplicity)` list for `ad(S_z)`.
fn predicted_ad_z(s: f64) -> Vec<(i64, usize)> {
    let two_s = (2.0 * s).round() as i64;
    (-two_s..=two_s)
        .rev()
        .map(|m| (m, (two_s + 1 - m.abs()) as usize))
        .collect()
}

/// Descending `(eigenvalue, multiplicity)` list for the adjoint Casimir.
fn predicted_casimir(s: f64) -> Vec<(i64, usize)> {
    let two_s = (2.0 * s).round() as i64;
    (0..=two_s)
        .rev()
        .map(|j| (j * (j + 1), (2 * j + 1) as usize))
        .collect()
}

/// Descending `(eigenvalue, multiplicity)` list for the planar sum.
fn predicted_planar(s: f64) -> Vec<(i64, usize)> {
    let two_s = (2.0 * s).round() as i64;
    let mut mult: BTreeMap<i64, usize> = BTreeMap::new();
    for j in 0..=two_s {
        for m in -j..=j {
            *mult.entry(j * (j + 1) - m * m).or_insert(0) += 1;
        }
    }
    mult.into_iter().rev().collect()
}
