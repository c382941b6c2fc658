// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrix exponentials.
//!
//! Two routes are provided:
//!
//! - [`expm_eigen`] diagonalizes `M = U diag(lambda) U^{-1}` and exponentiates
//!   the eigenvalues. This is accurate whenever the eigenvector basis is
//!   well conditioned, which holds for normal matrices (the main use case:
//!   generators of unital dynamics are often normal).
//! - [`expm_pade`] is the degree-13 Pade approximant with scaling and
//!   squaring (Higham 2005, "The scaling and squaring method for the matrix
//!   exponential revisited"), valid for arbitrary dense matrices.
//!
//! Both routes agree to ~1e-13 relative Frobenius error on the problem sizes
//! used in this crate; the caller picks the route (see
//! [`super::superop_exp`]).

use super::{faer_bridge, identity, CMat, C64};
use crate::error::Result;

/// One-norm (maximum absolute column sum).
fn one_norm(m: &CMat) -> f64 {
    let mut best: f64 = 0.0;
    for j in 0..m.ncols() {
        let s: f64 = (0..m.nrows()).map(|i| m[(i, j)].norm()).sum();
        best = best.max(s);
    }
    best
}

/// Exponential via eigendecomposition: `exp(M) = U exp(D) U^{-1}`.
pub(crate) fn expm_eigen(m: &CMat) -> Result<CMat> {
    let (u, vals) = faer_bridge::eigendecomposition(m)?;
    let n = m.nrows();
    // U * diag(exp(lambda)), then right-divide by U via a solve on the
    // transposed system: X = W U^{-1}  <=>  U^T X^T = W^T.
    let mut w = u.clone();
    for j in 0..n {
        let e = vals[j].exp();
        for i in 0..n {
            w[(i, j)] *= e;
        }
    }
    let ut = u.t().to_owned();
    let wt = w.t().to_owned();
    let xt = faer_bridge::solve(&ut, &wt)?;
    Ok(xt.t().to_owned())
}

/// Pade coefficients for the degree-13 approximant.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Theta_13 from Higham's error analysis: for `||A||_1 <= THETA_13` the
/// degree-13 approximant attains double-precision accuracy without scaling.
const THETA_13: f64 = 5.371_920_351_148_152;

/// Exponential via degree-13 Pade approximation with scaling and squaring.
pub(crate) fn expm_pade(m: &CMat) -> Result<CMat> {
    let n = m.nrows();
    let norm = one_norm(m);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = m.mapv(|z| z / C64::new(2f64.powi(s), 0.0));

    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let eye = identity(n);

    let b = &PADE13;
    // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let inner_u = a6.mapv(|z| z * b[13]) + a4.mapv(|z| z * b[11]) + a2.mapv(|z| z * b[9]);
    let u_poly = a6.dot(&inner_u)
        + a6.mapv(|z| z * b[7])
        + a4.mapv(|z| z * b[5])
        + a2.mapv(|z| z * b[3])
        + eye.mapv(|z| z * b[1]);
    let u = a.dot(&u_poly);
    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let inner_v = a6.mapv(|z| z * b[12]) + a4.mapv(|z| z * b[10]) + a2.mapv(|z| z * b[8]);
    let v = a6.dot(&inner_v)
        + a6.mapv(|z| z * b[6])
        + a4.mapv(|z| z * b[4])
        + a2.mapv(|z| z * b[2])
        + eye.mapv(|z| z * b[0]);

    // exp(A) ~ (V - U)^{-1} (V + U)
    let vp = &v + &u;
    let vm = &v - &u;
    let mut r = faer_bridge::solve(&vm, &vp)?;
    for _ in 0..s {
        r = r.dot(&r);
    }
    Ok(r)
}
