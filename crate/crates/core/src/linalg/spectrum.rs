// SPDX-License-Identifier: Apache-2.0

//! Spectral utilities: Hermitian eigenvalues and degeneracy grouping.

use super::{faer_bridge, CMat, C64};
use crate::error::Result;

/// Eigenvalue cluster: a representative value and its multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCluster {
    /// Mean of the clustered eigenvalues.
    pub value: C64,
    /// Number of eigenvalues in the cluster.
    pub multiplicity: usize,
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    faer_bridge::self_adjoint_eigenvalues(m)
}

/// Group a spectrum into degenerate clusters.
///
/// Eigenvalues within complex distance `tol` of a cluster representative are
/// merged (greedy pass over values sorted by real part, then imaginary
/// part). Clusters are returned sorted by descending real part.
pub fn group_spectrum(values: &[C64], tol: f64) -> Vec<SpectralCluster> {
    let mut sorted: Vec<C64> = values.to_vec();
    sorted.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });

    let mut clusters: Vec<(C64, Vec<C64>)> = Vec::new();
    'outer: for v in sorted {
        for (rep, members) in clusters.iter_mut() {
            if (v - *rep).norm() <= tol {
                members.push(v);
                // Keep the representative as the running mean so chained
                // near-degeneracies don't walk away from the cluster.
                let n = members.len() as f64;
                *rep = members.iter().sum::<C64>() / n;
                continue 'outer;
            }
        }
        clusters.push((v, vec![v]));
    }

    let mut out: Vec<SpectralCluster> = clusters
        .into_iter()
        .map(|(rep, members)| SpectralCluster {
            value: rep,
            multiplicity: members.len(),
        })
        .collect();
    out.sort_by(|a, b| {
        b.value
            .re
            .partial_cmp(&a.value.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                b.value
                    .im
                    .partial_cmp(&a.value.im)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_degenerate_values_with_multiplicity() {
        let vals = vec![
            C64::new(1.0, 0.0),
            C64::new(1.0 + 1e-12, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-2.0, 0.0),
            C64::new(-2.0, 1e-12),
        ];
        let clusters = group_spectrum(&vals, 1e-8);
        assert_eq!(clusters.len(), 3);
        assert_eq!(clusters[0].multiplicity, 2); // ~1.0
        assert_eq!(clusters[1].multiplicity, 1); // 0.0
        assert_eq!(clusters[2].multiplicity, 2); // ~-2.0
    }
}
