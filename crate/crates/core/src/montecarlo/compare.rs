// SPDX-License-Identifier: Apache-2.0

//! Per-instant deviation report between an ensemble and a prediction.
//!
//! The comparison is statistical, not exact: the ensemble mean fluctuates
//! around the true average with the jackknife standard error, so purity
//! gaps are standardized to z-scores and aggregated into a mean-squared
//! score (close to one when the prediction is compatible with the Monte
//! Carlo noise, much larger when it is biased).

use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMat};

use super::ensemble::{bloch_of, frob_sq, EnsembleResult};

/// Standard errors below this floor mark degenerate points (for example
/// the initial state, identical in every trajectory) that cannot be
/// standardized and are excluded from the score.
const SE_FLOOR: f64 = 1e-14;

/// Deviations at one save instant.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    /// Coarse time.
    pub s: f64,
    /// Lab time.
    pub t: f64,
    /// Ensemble purity (plug-in).
    pub purity_mc: f64,
    /// Predicted purity.
    pub purity_predicted: f64,
    /// Jackknife standard error of the ensemble purity.
    pub purity_se: f64,
    /// `(purity_mc - purity_predicted) / purity_se`, or 0 at degenerate
    /// points.
    pub z_purity: f64,
    /// Trace distance between the mean state and the prediction.
    pub trace_distance: f64,
    /// Euclidean gap between Bloch vectors (qubits only).
    pub bloch_gap: Option<f64>,
}

/// Full deviation report.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    rows: Vec<ComparisonRow>,
    score: f64,
    n_scored: usize,
    max_trace_distance: f64,
}

impl ComparisonReport {
    /// Per-instant deviations.
    pub fn rows(&self) -> &[ComparisonRow] {
        &self.rows
    }

    /// Mean squared purity z-score over the non-degenerate instants
    /// (compatible predictions land near one).
    pub fn score(&self) -> f64 {
        self.score
    }

    /// Number of instants entering the score.
    pub fn n_scored(&self) -> usize {
        self.n_scored
    }

    /// Largest trace distance over the grid.
    pub fn max_trace_distance(&self) -> f64 {
        self.max_trace_distance
    }

    /// JSON rendering of the rows and aggregates.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "score": self.score,
            "n_scored": self.n_scored,
            "max_trace_distance": self.max_trace_distance,
            "rows": self.rows.iter().map(|r| json!({
                "s": r.s,
                "t": r.t,
                "purity_mc": r.purity_mc,
                "purity_predicted": r.purity_predicted,
                "purity_se": r.purity_se,
                "z_purity": r.z_purity,
                "trace_distance": r.trace_distance,
                "bloch_gap": r.bloch_gap,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Compare an ensemble against predicted states on the same save grid.
///
/// `predicted[j]` must be the density matrix at the ensemble's j-th save
/// instant; a length or dimension mismatch is an error, not a zero-padded
/// comparison.
pub fn compare(ensemble: &EnsembleResult, predicted: &[CMat]) -> Result<ComparisonReport> {
    let states = ensemble.states();
    if predicted.len() != states.len() {
        return Err(Error::Dimension(format!(
            "prediction covers {} instants but the ensemble saved {}",
            predicted.len(),
            states.len()
        )));
    }

    let mut rows = Vec::with_capacity(states.len());
    let mut sum_z2 = 0.0;
    let mut n_scored = 0usize;
    let mut max_td = 0.0_f64;

    for (j, (mc, pred)) in states.iter().zip(predicted).enumerate() {
        if pred.nrows() != mc.nrows() || pred.ncols() != mc.ncols() {
            return Err(Error::Dimension(format!(
                "prediction at index {j} has shape {}x{}, expected {}x{}",
                pred.nrows(),
                pred.ncols(),
                mc.nrows(),
                mc.ncols()
            )));
        }
        let purity_mc = frob_sq(mc);
        let purity_predicted = frob_sq(pred);
        let purity_se = ensemble.purity_se()[j];

        let z_purity = if purity_se.is_finite() && purity_se >= SE_FLOOR {
            n_scored += 1;
            let z = (purity_mc - purity_predicted) / purity_se;
            sum_z2 += z * z;
            z
        } else {
            0.0
        };

        let diff = mc - pred;
        let eigs = hermitian_eigenvalues(&diff)?;
        let trace_distance = 0.5 * eigs.iter().map(|v| v.abs()).sum::<f64>();
        max_td = max_td.max(trace_distance);

        let bloch_gap = ensemble.bloch().map(|stats| {
            let rp = bloch_of(pred);
            let rm = stats[j].mean;
            ((rm[0] - rp[0]).powi(2) + (rm[1] - rp[1]).powi(2) + (rm[2] - rp[2]).powi(2))
                .sqrt()
        });

        rows.push(ComparisonRow {
            s: ensemble.times_s()[j],
            t: ensemble.times_t()[j],
            purity_mc,
            purity_predicted,
            purity_se,
            z_purity,
            trace_distance,
            bloch_gap,
        });
    }

    let score = if n_scored > 0 {
        sum_z2 / n_scored as f64
    } else {
        0.0
    };
    Ok(ComparisonReport {
        rows,
        score,
        n_scored,
        max_trace_distance: max_td,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::ControlSchedule;
    use crate::linalg::{identity, spin_operators, DensityMatrix};
    use crate::montecarlo::{run_ensemble, SimConfig};
    use crate::noise::NoiseModel;

    fn small_ensemble() -> EnsembleResult {
        let [_, _, sz] = spin_operators(0.5).unwrap();
        let config = SimConfig::new(
            ControlSchedule::none(2).unwrap(),
            NoiseModel::ou(0.5, 2.0).unwrap(),
            vec![sz],
            DensityMatrix::plus_state(),
            0.2,
            0.2,
            0.4,
            16,
            5,
        )
        .unwrap();
        run_ensemble(&config).unwrap()
    }

    /// Comparing an ensemble against its own states gives zero score and
    /// zero distances.
    #[test]
    fn self_comparison_is_exact() {
        let ensemble = small_ensemble();
        let report = compare(&ensemble, ensemble.states()).unwrap();
        assert_eq!(report.score(), 0.0);
        assert!(report.n_scored() > 0);
        assert!(report.max_trace_distance() < 1e-14);
        for row in report.rows() {
            assert_eq!(row.z_purity, 0.0);
            assert!(row.bloch_gap.unwrap() < 1e-14);
        }
    }

    /// Grid mismatches are structural errors.
    #[test]
    fn grid_mismatch_is_rejected() {
        let ensemble = small_ensemble();
        let short = &ensemble.states()[..ensemble.states().len() - 1];
        assert!(matches!(
            compare(&ensemble, short),
            Err(Error::Dimension(_))
        ));
    }

    /// A visibly biased prediction produces a large score and a visible
    /// trace distance.
    #[test]
    fn biased_prediction_scores_large() {
        let ensemble = small_ensemble();
        let biased: Vec<CMat> = ensemble
            .states()
            .iter()
            .map(|rho| {
                let mixed = identity(2).mapv(|z| z * 0.5);
                rho.mapv(|z| z * 0.9) + mixed.mapv(|z| z * 0.1)
            })
            .collect();
        let report = compare(&ensemble, &biased).unwrap();
        assert!(report.score() > 10.0, "score = {}", report.score());
        assert!(report.max_trace_distance() > 0.005);
    }
}
