// SPDX-License-Identifier: Apache-2.0

//! Error types shared across the library.
//!
//! Every fallible constructor and solver returns [`Error`] so that callers
//! (and the CLI) can surface a single, descriptive failure channel instead of
//! panicking deep inside numerical kernels.

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix that must be square (or of a specific dimension) is not.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A matrix violated a structural requirement (Hermiticity, positivity,
    /// trace normalization) beyond the documented tolerance.
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A noise model failed a physical admissibility check, e.g. a power
    /// spectrum with negative values.
    #[error("invalid noise model: {0}")]
    InvalidNoiseModel(String),

    /// A control schedule failed validation (segment fractions, dimensions,
    /// non-unitary segment operators, ...).
    #[error("invalid control schedule: {0}")]
    InvalidSchedule(String),

    /// A numerical routine failed to reach its accuracy target.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// (De)serialization of matrices, configs, or results failed.
    #[error("serialization error: {0}")]
    Serialization(String),

    /// Underlying I/O failure when reading configs or writing results.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
