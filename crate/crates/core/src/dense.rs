//! Deterministic enumeration of a dense subset of `ℂ^dim`.
//!
//! Level `r = 0, 1, 2, …` holds the Gaussian rationals `(p + qi)/2^r` with
//! `|p|, |q| ≤ r·2^r`, ordered lexicographically in `(p, q)`. A `dim`-tuple
//! level is the product of `dim` copies of the scalar level, enumerated
//! lexicographically with the first component most significant. Level `r`
//! covers the square `[−r, r]²` with mesh `2^{−r}`, so the union is dense.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width `r·2^r` of the numerator range at level `r`.
fn numerator_bound(level: u32) -> u64 {
    (level as u64) << level
}

/// Number of scalar points at level `r`.
fn level_size(level: u32) -> u64 {
    2 * numerator_bound(level) + 1
}

/// The `index`-th element (1-based) of the dense sequence in `ℂ^dim`.
pub fn dense_point(index: u64, dim: usize) -> Result<Vec<Complex64>> {
    if index == 0 {
        return Err(Error::invalid("dense index is 1-based"));
    }
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let mut rest = (index - 1) as u128;
    for level in 0u32.. {
        let side = level_size(level) as u128;
        let scalars = side * side;
        // None: the level is larger than any u64 index, so the index lands in it.
        let count = (0..dim).try_fold(1u128, |acc, _| acc.checked_mul(scalars));
        match count {
            Some(c) if rest >= c => rest -= c,
            _ => return Ok(decode(rest, level, dim)),
        }
    }
    unreachable!("levels are unbounded")
}

fn decode(mut offset: u128, level: u32, dim: usize) -> Vec<Complex64> {
    let side = level_size(level) as u128;
    let scalars = side * side;
    let bound = numerator_bound(level) as i64;
    let denom = (1u64 << level) as f64;
    let mut digits = vec![0u128; dim];
    for d in digits.iter_mut().rev() {
        *d = offset % scalars;
        offset /= scalars;
    }
    digits
        .into_iter()
        .map(|d| {
            let p = (d / side) as i64 - bound;
            let q = (d % side) as i64 - bound;
            Complex64::new(p as f64 / denom, q as f64 / denom)
        })
        .collect()
}

/// Target stream configuration: `c_j = scale · dense_point(j, dim)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetEnum {
    #[serde(default = "one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for TargetEnum {
    fn default() -> Self {
        TargetEnum { scale: 1.0 }
    }
}

impl TargetEnum {
    pub fn point(&self, index: u64, dim: usize) -> Result<Vec<Complex64>> {
        Ok(dense_point(index, dim)?
            .into_iter()
            .map(|z| z * self.scale)
            .collect())
    }
}
