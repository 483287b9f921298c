//! Fejer polynomials `Q_{N,n}(t) = 2 sin(Nt) Σ_{k=1}^n sin(kt)/k`, their
//! rescalings `P = (c/H_n)·Q`, and order selection.
//!
//! Coefficient table: `+1/(2k)` at `±(N−k)` and `−1/(2k)` at `±(N+k)`,
//! `k = 1..n`. Hence `Q(0) = 0`, `S_N(Q, 0) = H_n` and the coefficient
//! sequence has total variation exactly 4.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::wrap_angle;
use crate::rational::{self, Rational};
use crate::trigpoly::{ExactComplex, TrigPoly};

/// Grid sup-norm cap for `Q_{N,n}` (`2·Si(π) ≈ 3.7039`).
pub const C_Q: f64 = 3.704;
/// Total variation of the coefficients of `Q_{N,n}`.
pub const C_V: f64 = 4.0;
/// Constant in `|S_k(Q_{N,n}, t)| ≤ C_S/|t|`, validated by [`decay_calibrate`] sweeps.
pub const C_S: f64 = 8.0;
/// `max(C_Q, C_V, C_S)`: one order threshold certifies all three bounds.
pub const KAPPA_DEFAULT: f64 = 8.0;
/// Default cap on the order `n` chosen by [`pick_order`].
pub const ORDER_CAP_DEFAULT: u64 = 10_000_000;
/// Orders up to this width keep exact rational coefficients after rescaling.
pub const EXACT_WIDTH_LIMIT: u64 = 64;

/// Fejer order `(N, n)` with `N > n ≥ 1`: `center` is `N`, `width` is `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawOrder", into = "RawOrder")]
pub struct FejerOrder {
    center: u64,
    width: u64,
}

#[derive(Serialize, Deserialize)]
struct RawOrder {
    #[serde(rename = "N")]
    center: u64,
    n: u64,
}

impl TryFrom<RawOrder> for FejerOrder {
    type Error = Error;
    fn try_from(r: RawOrder) -> Result<Self> {
        FejerOrder::new(r.center, r.n)
    }
}

impl From<FejerOrder> for RawOrder {
    fn from(o: FejerOrder) -> Self {
        RawOrder {
            center: o.center,
            n: o.width,
        }
    }
}

impl FejerOrder {
    pub fn new(center: u64, width: u64) -> Result<Self> {
        if width == 0 || center <= width || center > i64::MAX as u64 / 4 {
            return Err(Error::InvalidOrder {
                big: center,
                small: width,
            });
        }
        Ok(FejerOrder { center, width })
    }

    pub fn center(&self) -> u64 {
        self.center
    }

    pub fn width(&self) -> u64 {
        self.width
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Orders must certify the norm, variation and decay budgets.
    Strict,
    /// Orders are configured; only the exact identities are guaranteed.
    Relaxed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledFejerSpec {
    pub order: FejerOrder,
    pub target: Complex64,
    pub eps: f64,
    pub mode: Mode,
}

/// Exact coefficients of `Q_{N,n}`.
pub fn fejer_coeffs(order: FejerOrder) -> TrigPoly {
    let (big, n) = (order.center as i64, order.width as i64);
    let mut items = Vec::with_capacity(4 * n as usize);
    for k in 1..=n {
        let half = Rational::new(BigInt::from(1), BigInt::from(2 * k));
        for sign in [-1i64, 1] {
            items.push((sign * (big - k), ExactComplex::real(half.clone())));
            items.push((sign * (big + k), ExactComplex::real(-half.clone())));
        }
    }
    TrigPoly::from_exact(items).expect("order bounds keep frequencies in range")
}

/// `s·Q_{N,n}` built directly in doubles (no rational detour).
pub fn fejer_values(order: FejerOrder, s: Complex64) -> TrigPoly {
    let (big, n) = (order.center as i64, order.width as i64);
    let mut items = Vec::with_capacity(4 * n as usize);
    for k in 1..=n {
        let v = s / (2 * k) as f64;
        for sign in [-1i64, 1] {
            items.push((sign * (big - k), v));
            items.push((sign * (big + k), -v));
        }
    }
    TrigPoly::from_values(items).expect("order bounds keep frequencies in range")
}

/// Resonance `S_N(Q_{N,n}, 0) = H_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Resonance {
    pub exact: Rational,
    pub value: f64,
}

pub fn fejer_resonance(order: FejerOrder) -> Resonance {
    let exact = rational::harmonic_exact(order.width);
    let value = rational::to_f64(&exact);
    Resonance { exact, value }
}

/// `P_{N,n} = (c/H_n)·Q_{N,n}`, so that `P(0) = 0` and `S_N(P, 0) = c`.
pub fn scaled_fejer(spec: &ScaledFejerSpec) -> Result<TrigPoly> {
    if !(spec.eps > 0.0) {
        return Err(Error::invalid("eps must be positive"));
    }
    let c = spec.target;
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(Error::invalid("target must be finite"));
    }
    let width = spec.order.width;
    let h = rational::harmonic(width);
    if spec.mode == Mode::Strict {
        let variation = C_V * c.norm() / h;
        if variation > spec.eps {
            return Err(Error::NotCertified {
                variation,
                eps: spec.eps,
            });
        }
    }
    if c.is_zero() {
        return Ok(TrigPoly::zero());
    }
    if width <= EXACT_WIDTH_LIMIT {
        let h_exact = rational::harmonic_exact(width);
        let ce = ExactComplex::from_f64(c);
        let s = ExactComplex {
            re: &ce.re / &h_exact,
            im: &ce.im / &h_exact,
        };
        Ok(fejer_coeffs(spec.order).scale_exact(&s, c / h))
    } else {
        Ok(fejer_values(spec.order, c / h))
    }
}

/// Smallest `n` with `H_n ≥ kappa·|c|/eps` (1 when `c = 0`).
pub fn pick_order(c: Complex64, eps: f64, kappa: f64) -> Result<u64> {
    pick_order_capped(c, eps, kappa, ORDER_CAP_DEFAULT)
}

pub fn pick_order_capped(c: Complex64, eps: f64, kappa: f64, cap: u64) -> Result<u64> {
    if !(eps > 0.0) || !(kappa > 0.0) {
        return Err(Error::invalid("eps and kappa must be positive"));
    }
    let threshold = kappa * c.norm() / eps;
    if !threshold.is_finite() {
        return Err(Error::invalid("order threshold is not finite"));
    }
    // ln n + γ < H_n < ln n + γ + 1/(2n): reject hopeless thresholds up front.
    let euler_gamma = 0.577_215_664_901_532_9;
    let cap_upper = (cap as f64).ln() + euler_gamma + 0.5 / cap as f64;
    if threshold > cap_upper {
        return Err(Error::OrderQuota {
            threshold,
            cap,
            reachable: (cap as f64).ln() + euler_gamma,
        });
    }
    let mut h = 0.0f64;
    let mut comp = 0.0f64;
    for n in 1..=cap {
        let y = 1.0 / n as f64 - comp;
        let next = h + y;
        comp = (next - h) - y;
        h = next;
        if h >= threshold {
            return Ok(n);
        }
    }
    Err(Error::OrderQuota {
        threshold,
        cap,
        reachable: h,
    })
}

/// `max |S_k(Q_{N,n}, t)|·|t̃|` over the samples and `0 ≤ k ≤ k_max`, with
/// `t̃` the representative of `t` in `(−π, π]`.
pub fn decay_calibrate(order: FejerOrder, t_samples: &[f64], k_max: u64) -> Result<f64> {
    let q = fejer_coeffs(order);
    let ks: Vec<u64> = (0..=k_max).collect();
    let mut worst = 0.0f64;
    for &t in t_samples {
        let tw = wrap_angle(t);
        if tw.abs() <= 1e-12 {
            return Err(Error::invalid("decay samples must be nonzero modulo 2π"));
        }
        for s in q.partial_sums_at(t, &ks) {
            worst = worst.max(s.norm() * tw.abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use std::f64::consts::PI;

    fn q(big: u64, n: u64) -> TrigPoly {
        fejer_coeffs(FejerOrder::new(big, n).unwrap())
    }

    #[test]
    fn order_validation() {
        assert!(FejerOrder::new(5, 3).is_ok());
        assert!(FejerOrder::new(3, 3).is_err());
        assert!(FejerOrder::new(5, 0).is_err());
        let o: FejerOrder = serde_json::from_str(r#"{"N":5,"n":3}"#).unwrap();
        assert_eq!((o.center(), o.width()), (5, 3));
        assert!(serde_json::from_str::<FejerOrder>(r#"{"N":2,"n":3}"#).is_err());
    }

    #[test]
    fn coefficient_table_5_3() {
        let p = q(5, 3);
        let expect = [
            (4, rat(1, 2)),
            (3, rat(1, 4)),
            (2, rat(1, 6)),
            (6, rat(-1, 2)),
            (7, rat(-1, 4)),
            (8, rat(-1, 6)),
        ];
        assert_eq!(p.len(), 12);
        for (k, v) in expect {
            for s in [-1, 1] {
                assert_eq!(
                    p.coeff_entry(s * k).unwrap().exact,
                    Some(ExactComplex::real(v.clone()))
                );
            }
        }
    }

    #[test]
    fn coefficient_table_2_1() {
        let p = q(2, 1);
        assert_eq!(p.frequencies().collect::<Vec<_>>(), vec![-3, -1, 1, 3]);
        assert_eq!(p.coeff(1).re, 0.5);
        assert_eq!(p.coeff(-3).re, -0.5);
    }

    #[test]
    fn product_form_agrees() {
        let t = 0.7f64;
        let product = 2.0
            * (5.0 * t).sin()
            * (1..=3)
                .map(|k| (k as f64 * t).sin() / k as f64)
                .sum::<f64>();
        assert!((q(5, 3).eval(t) - Complex64::new(product, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn evaluation_at_zero_and_pi() {
        assert!(q(5, 3).eval(0.0).norm() < 1e-15);
        assert!(q(5, 3).eval(PI).norm() < 1e-14);
        assert_eq!(
            q(5, 3).partial_sum_at_zero_exact(100),
            Some(ExactComplex::zero())
        );
    }

    #[test]
    fn partial_sums_at_zero() {
        let p = q(5, 3);
        assert!((p.partial_sum(5, 0.0).re - 11.0 / 6.0).abs() < 1e-15);
        assert_eq!(p.partial_sum(1, 0.0), Complex64::zero());
        assert!(p.partial_sum(8, 0.0).norm() < 1e-15);
    }

    #[test]
    fn resonance_values() {
        let o = |a, b| FejerOrder::new(a, b).unwrap();
        assert_eq!(fejer_resonance(o(5, 3)).exact, rat(11, 6));
        assert_eq!(fejer_resonance(o(2, 1)).exact, int(1));
        let h1000 = fejer_resonance(o(2000, 1000));
        // Independent: sum the reciprocals over a common denominator.
        let lcm = (1..=1000u64).fold(BigInt::from(1), |acc, k| {
            num_integer::Integer::lcm(&acc, &BigInt::from(k))
        });
        let numer: BigInt = (1..=1000u64).map(|k| &lcm / BigInt::from(k)).sum();
        assert_eq!(h1000.exact, Rational::new(numer, lcm));
        assert!((h1000.value - 7.485_470_860_550_345).abs() < 1e-12);
    }

    #[test]
    fn scaled_identity_scaling() {
        let order = FejerOrder::new(5, 3).unwrap();
        let spec = |c: Complex64, mode| ScaledFejerSpec {
            order,
            target: c,
            eps: 1.0,
            mode,
        };
        let same = scaled_fejer(&spec(Complex64::new(11.0 / 6.0, 0.0), Mode::Relaxed)).unwrap();
        let base = q(5, 3);
        for (k, c) in base.iter() {
            assert!((same.coeff(k) - c.value).norm() < 1e-16);
        }
        assert!(scaled_fejer(&spec(Complex64::zero(), Mode::Strict))
            .unwrap()
            .is_zero());
        let i = scaled_fejer(&spec(Complex64::i(), Mode::Relaxed)).unwrap();
        assert!((i.partial_sum(5, 0.0) - Complex64::i()).norm() < 1e-12);
        assert_eq!(
            i.partial_sum_at_zero_exact(5).unwrap(),
            ExactComplex {
                re: rat(0, 1),
                im: rat(1, 1)
            }
        );
    }

    #[test]
    fn strict_mode_rejects_uncertifiable() {
        let order = FejerOrder::new(5, 3).unwrap();
        let s = ScaledFejerSpec {
            order,
            target: Complex64::new(1.0, 0.0),
            eps: 0.5,
            mode: Mode::Strict,
        };
        assert!(matches!(scaled_fejer(&s), Err(Error::NotCertified { .. })));
        let relaxed = ScaledFejerSpec {
            mode: Mode::Relaxed,
            ..s
        };
        assert!(scaled_fejer(&relaxed).is_ok());
    }

    #[test]
    fn large_width_uses_double_path() {
        let order = FejerOrder::new(5000, 2000).unwrap();
        let s = ScaledFejerSpec {
            order,
            target: Complex64::new(0.0, 2.0),
            eps: 1.0,
            mode: Mode::Relaxed,
        };
        let p = scaled_fejer(&s).unwrap();
        assert!(!p.is_exact());
        assert!((p.partial_sum(5000, 0.0) - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn pick_order_examples() {
        assert_eq!(pick_order(Complex64::zero(), 0.5, 4.0).unwrap(), 1);
        assert_eq!(pick_order(Complex64::new(1.0, 0.0), 4.0, 4.0).unwrap(), 1);
        assert_eq!(pick_order(Complex64::new(1.0, 0.0), 2.0, 4.0).unwrap(), 4);
        assert!(matches!(
            pick_order(Complex64::new(1.0, 0.0), 0.1, 8.0),
            Err(Error::OrderQuota { .. })
        ));
        assert!(matches!(
            pick_order_capped(Complex64::new(1.0, 0.0), 1.0, 4.0, 10),
            Err(Error::OrderQuota { .. })
        ));
    }

    /// Brute force over every k ≤ k_max, summing coefficients by hand.
    fn decay_oracle(order: FejerOrder, t: f64, k_max: u64) -> f64 {
        let p = fejer_coeffs(order);
        let tw = wrap_angle(t).abs();
        (0..=k_max)
            .map(|k| {
                let mut s = Complex64::zero();
                for m in -(k as i64)..=(k as i64) {
                    s += p.coeff(m) * Complex64::from_polar(1.0, m as f64 * t);
                }
                s.norm() * tw
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn decay_calibrate_examples() {
        let o53 = FejerOrder::new(5, 3).unwrap();
        let got = decay_calibrate(o53, &[PI], 8).unwrap();
        // S_k(Q,π) for k = 2..8: 1/3, -1/6, 5/6, 5/6, -1/6, 1/3, 0.
        let want = decay_oracle(o53, PI, 8);
        assert!((got - want).abs() < 1e-12);
        assert!((want - 5.0 * PI / 6.0).abs() < 1e-12);

        let o21 = FejerOrder::new(2, 1).unwrap();
        let got = decay_calibrate(o21, &[PI / 2.0], 3).unwrap();
        assert!((got - decay_oracle(o21, PI / 2.0, 3)).abs() < 1e-12);
        assert!(got < 1e-15);

        assert_eq!(decay_calibrate(o53, &[1.3], 0).unwrap(), 0.0);
        assert!(decay_calibrate(o53, &[2.0 * PI], 3).is_err());
    }
}
