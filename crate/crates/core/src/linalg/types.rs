// SPDX-License-Identifier: Apache-2.0

//! Validated operator types: Hermitian observables and density matrices.

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use super::serialize::{complex_matrix_from_json, complex_matrix_to_json};
use super::{
    dagger, faer_bridge, hermiticity_defect, trace, CMat, C64, HERMITICITY_TOL, PSD_EIG_TOL,
    TRACE_TOL,
};
use crate::error::{Error, Result};

/// A Hermitian operator on a `dim`-dimensional Hilbert space.
///
/// The constructor accepts matrices that are Hermitian up to a maximum
/// entrywise deviation of [`HERMITICITY_TOL`] and stores the exactly
/// symmetrized part `(M + M^dagger)/2`; anything worse is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    entries: CMat,
}

impl HermitianOperator {
    /// Validate and symmetrize a matrix into a Hermitian operator.
    pub fn new(entries: CMat) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c || r == 0 {
            return Err(Error::Dimension(format!(
                "Hermitian operator must be square and non-empty, got {r}x{c}"
            )));
        }
        let defect = hermiticity_defect(&entries);
        if defect > HERMITICITY_TOL {
            return Err(Error::InvalidOperator(format!(
                "matrix deviates from Hermiticity by {defect:.3e} \
                 (tolerance {HERMITICITY_TOL:.1e})"
            )));
        }
        let sym = (&entries + &dagger(&entries)).mapv(|z| z * 0.5);
        Ok(Self { dim: r, entries: sym })
    }

    /// The zero operator.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: CMat::zeros((dim, dim)),
        }
    }

    /// The identity operator.
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            entries: super::identity(dim),
        }
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix entries.
    pub fn matrix(&self) -> &CMat {
        &self.entries
    }

    /// Consume and return the matrix entries.
    pub fn into_matrix(self) -> CMat {
        self.entries
    }

    /// Scale by a real factor (stays Hermitian).
    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.mapv(|z| z * factor),
        }
    }

    /// Sum of two Hermitian operators.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "cannot add operators of dimension {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(Self {
            dim: self.dim,
            entries: &self.entries + &other.entries,
        })
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        super::frobenius_norm(&self.entries)
    }

    /// Operator (spectral) norm: the largest absolute eigenvalue.
    pub fn operator_norm(&self) -> f64 {
        let vals = faer_bridge::self_adjoint_eigenvalues(&self.entries)
            .expect("self-adjoint eigensolve of a validated Hermitian matrix");
        vals.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        faer_bridge::self_adjoint_eigenvalues(&self.entries)
            .expect("self-adjoint eigensolve of a validated Hermitian matrix")
    }

    /// Serialize to the documented JSON layout (`dim` plus row-major
    /// interleaved re/im pairs).
    pub fn to_json(&self) -> serde_json::Value {
        complex_matrix_to_json(&self.entries)
    }

    /// Deserialize from the documented JSON layout, re-running validation.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        Self::new(complex_matrix_from_json(v)?)
    }
}

impl Serialize for HermitianOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Self::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// A density matrix: Hermitian, unit trace (within [`TRACE_TOL`]), and
/// positive semidefinite (eigenvalues above [`PSD_EIG_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: CMat,
}

impl DensityMatrix {
    /// Validate a matrix as a density matrix.
    pub fn new(entries: CMat) -> Result<Self> {
        let herm = HermitianOperator::new(entries)?;
        let tr = trace(herm.matrix());
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidOperator(format!(
                "density matrix trace is {tr}, expected 1 within {TRACE_TOL:.1e}"
            )));
        }
        let eigs = faer_bridge::self_adjoint_eigenvalues(herm.matrix())?;
        let min_eig = eigs.first().copied().unwrap_or(0.0);
        if min_eig < PSD_EIG_TOL {
            return Err(Error::InvalidOperator(format!(
                "density matrix has eigenvalue {min_eig:.3e} below the \
                 positivity tolerance {PSD_EIG_TOL:.1e}"
            )));
        }
        Ok(Self {
            dim: herm.dim,
            entries: herm.entries,
        })
    }

    /// The pure state `|psi><psi|` for a (not necessarily normalized,
    /// but nonzero) state vector.
    pub fn pure(psi: &Array1<C64>) -> Result<Self> {
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::InvalidParameter(
                "state vector must be nonzero".into(),
            ));
        }
        let d = psi.len();
        let m = CMat::from_shape_fn((d, d), |(i, j)| psi[i] * psi[j].conj() / norm_sq);
        Self::new(m)
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            dim,
            entries: super::identity(dim).mapv(|z| z / dim as f64),
        }
    }

    /// The qubit state `|+><+|` with Bloch vector `(1, 0, 0)`.
    pub fn plus_state() -> Self {
        let psi = Array1::from(vec![
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ]);
        Self::pure(&psi).expect("|+> is a valid state")
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix entries.
    pub fn matrix(&self) -> &CMat {
        &self.entries
    }

    /// Purity `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let sq = self.entries.dot(&self.entries);
        trace(&sq).re
    }

    /// Bloch vector `(Tr(rho sigma_x), Tr(rho sigma_y), Tr(rho sigma_z))`
    /// for a qubit state.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.dim != 2 {
            return Err(Error::Dimension(format!(
                "Bloch vector requires a qubit, got dimension {}",
                self.dim
            )));
        }
        let r = &self.entries;
        let rx = 2.0 * r[(0, 1)].re;
        let ry = -2.0 * r[(0, 1)].im;
        let rz = (r[(0, 0)] - r[(1, 1)]).re;
        Ok([rx, ry, rz])
    }

    /// Trace distance `(1/2) ||rho - sigma||_1`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "trace distance between dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let diff = &self.entries - &other.entries;
        let eigs = faer_bridge::self_adjoint_eigenvalues(&diff)?;
        Ok(0.5 * eigs.iter().map(|v| v.abs()).sum::<f64>())
    }

    /// Serialize to the documented JSON layout.
    pub fn to_json(&self) -> serde_json::Value {
        complex_matrix_to_json(&self.entries)
    }

    /// Deserialize from the documented JSON layout, re-running validation.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        Self::new(complex_matrix_from_json(v)?)
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Self::from_json(&v).map_err(serde::de::Error::custom)
    }
}
