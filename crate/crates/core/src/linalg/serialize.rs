// SPDX-License-Identifier: Apache-2.0

//! JSON layout for complex matrices.
//!
//! A square complex matrix of dimension `n` is stored as
//!
//! ```json
//! { "dim": n, "data": [re00, im00, re01, im01, ...] }
//! ```
//!
//! with entries in **row-major** order and each entry interleaved as a
//! (re, im) pair, for a total of `2 n^2` numbers. Floating-point values
//! survive the round trip bit-exactly (serde_json emits shortest
//! round-trippable decimal representations).

use super::{CMat, C64};
use crate::error::{Error, Result};

/// Serialize a square complex matrix to the documented JSON layout.
pub fn complex_matrix_to_json(m: &CMat) -> serde_json::Value {
    let n = m.nrows();
    let mut data = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            data.push(m[(i, j)].re);
            data.push(m[(i, j)].im);
        }
    }
    serde_json::json!({ "dim": n, "data": data })
}

/// Deserialize a square complex matrix from the documented JSON layout.
pub fn complex_matrix_from_json(v: &serde_json::Value) -> Result<CMat> {
    let dim = v
        .get("dim")
        .and_then(|d| d.as_u64())
        .ok_or_else(|| Error::Serialization("missing or invalid 'dim' field".into()))?
        as usize;
    let data = v
        .get("data")
        .and_then(|d| d.as_array())
        .ok_or_else(|| Error::Serialization("missing or invalid 'data' field".into()))?;
    if data.len() != 2 * dim * dim {
        return Err(Error::Serialization(format!(
            "'data' must hold {} numbers for dim {dim}, got {}",
            2 * dim * dim,
            data.len()
        )));
    }
    let nums: Vec<f64> = data
        .iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| Error::Serialization("non-numeric entry in 'data'".into()))
        })
        .collect::<Result<_>>()?;
    Ok(CMat::from_shape_fn((dim, dim), |(i, j)| {
        let k = 2 * (i * dim + j);
        C64::new(nums[k], nums[k + 1])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let m = ndarray::array![
            [C64::new(1.0 / 3.0, -2.0 / 7.0), C64::new(0.1, 0.2)],
            [C64::new(-1e-17, 3.5), C64::new(std::f64::consts::PI, 0.0)]
        ];
        let json = complex_matrix_to_json(&m);
        let text = serde_json::to_string(&json).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        let m2 = complex_matrix_from_json(&back).unwrap();
        for (a, b) in m.iter().zip(m2.iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn rejects_malformed_layouts() {
        let bad = serde_json::json!({ "dim": 2, "data": [1.0, 2.0] });
        assert!(complex_matrix_from_json(&bad).is_err());
        let bad = serde_json::json!({ "data": [] });
        assert!(complex_matrix_from_json(&bad).is_err());
    }
}
