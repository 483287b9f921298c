//! Phase factors `e^{ikt}` with compensated reduction of `k·t` modulo `2π`.
//!
//! The product `k·t` is formed exactly as a double-double, then reduced by a
//! double-double representation of `2π`. The residual is accurate to a few
//! ulps of `π` for every `|k| < 2^53`, so large block frequencies keep their
//! phase.

use num_complex::Complex64;

const TWO_PI_HI: f64 = std::f64::consts::TAU;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Reduce `k·t` into `[-π, π]`, returned as a head/tail pair.
pub fn reduce_phase(k: i64, t: f64) -> (f64, f64) {
    debug_assert!(k.unsigned_abs() < (1u64 << 53));
    let (p, pe) = two_prod(k as f64, t);
    let q = (p / TWO_PI_HI).round();
    if q == 0.0 {
        return two_sum(p, pe);
    }
    let (a, ae) = two_prod(q, TWO_PI_HI);
    let (b, be) = two_prod(q, TWO_PI_LO);
    // p and a agree to within a few units of 2π, so p - a is exact.
    let head = p - a;
    let tail = pe - ae - b - be;
    two_sum(head, tail)
}

/// Reduce an angle to `(-π, π]`.
pub fn wrap_angle(t: f64) -> f64 {
    let (hi, lo) = reduce_phase(1, t);
    let r = hi + lo;
    if r <= -std::f64::consts::PI {
        r + TWO_PI_HI
    } else {
        r
    }
}

/// `e^{ikt}`.
#[inline]
pub fn cis(k: i64, t: f64) -> Complex64 {
    let (hi, lo) = reduce_phase(k, t);
    let (s, c) = hi.sin_cos();
    Complex64::new(c - s * lo, s + c * lo)
}
