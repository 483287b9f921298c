//! Randomized invariants checked with proptest.

use proptest::prelude::*;

use ufourier::cantor;
use ufourier::fejer::{self, FejerOrder};
use ufourier::phase::{cis, wrap_angle};
use ufourier::rational;
use ufourier::schedule::{schedule_finite, BlockSchedule};
use ufourier::trigpoly::TrigPoly;
use ufourier::Complex64;

fn order() -> impl Strategy<Value = FejerOrder> {
    (2u64..200).prop_flat_map(|big| (1..big).prop_map(move |n| FejerOrder::new(big, n).unwrap()))
}

fn poly() -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((-40i64..40, -2.0f64..2.0, -2.0f64..2.0), 0..20).prop_map(|v| {
        TrigPoly::from_values(v.into_iter().map(|(k, re, im)| (k, Complex64::new(re, im)))).unwrap()
    })
}

/// Direct evaluation from the definition, independent of the library's summation.
fn naive_partial_sum(p: &TrigPoly, n: u64, t: f64) -> Complex64 {
    p.iter()
        .filter(|(k, _)| k.unsigned_abs() <= n)
        .map(|(k, c)| c.value * Complex64::from_polar(1.0, k as f64 * t))
        .sum()
}

fn assert_separated(s: &BlockSchedule) {
    for w in s.entries().windows(2) {
        let (a, b) = (w[0].order, w[1].order);
        assert!(3 * a.center() + a.width() < b.center() - b.width());
    }
}

proptest! {
    #[test]
    fn fejer_is_real_odd_free_and_resonant(o in order(), t in -4.0f64..4.0) {
        let q = fejer::fejer_values(o, Complex64::new(1.0, 0.0));
        prop_assert!(q.is_conjugate_symmetric());
        prop_assert!(q.coeff_entry(0).is_none());
        prop_assert!(q.eval(t).im.abs() < 1e-9);
        prop_assert!(q.eval(0.0).norm() < 1e-9);
        let h: f64 = (1..=o.width()).map(|k| 1.0 / k as f64).sum();
        prop_assert!((q.partial_sum(o.center(), 0.0).re - h).abs() < 1e-9);
        prop_assert!((q.coeff_total_variation() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn evaluation_is_linear(p in poly(), q in poly(), a in -3.0f64..3.0, t in -4.0f64..4.0) {
        let s = Complex64::new(a, 0.5);
        let lhs = p.scale(s).add(&q).eval(t);
        let rhs = s * p.eval(t) + q.eval(t);
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn partial_sums_match_the_definition(p in poly(), mut ns in prop::collection::vec(0u64..60, 1..8), t in -4.0f64..4.0) {
        ns.sort_unstable();
        let got = p.partial_sums_at(t, &ns);
        for (&n, g) in ns.iter().zip(&got) {
            prop_assert!((g - naive_partial_sum(&p, n, t)).norm() < 1e-9);
        }
        // Past the degree, partial sums are stable and equal the value.
        prop_assert!((p.partial_sum(p.degree() + 5, t) - p.eval(t)).norm() < 1e-9);
    }

    #[test]
    fn modulation_and_shift_act_on_values(p in poly(), m in 0i64..100, t0 in -3.0f64..3.0, t in -4.0f64..4.0) {
        let modulated = p.modulate(m).unwrap();
        prop_assert!((modulated.eval(t) - cis(m, t) * p.eval(t)).norm() < 1e-9);
        prop_assert!((p.shift_argument(t0).eval(t) - p.eval(t - t0)).norm() < 1e-9);
    }

    #[test]
    fn finite_schedules_are_separated(widths in prop::collection::vec(1u64..500, 1..12), margin in 0u64..5) {
        let s = schedule_finite(&widths, margin, i64::MAX).unwrap();
        s.validate().unwrap();
        assert_separated(&s);
        for (e, &w) in s.entries().iter().zip(&widths) {
            prop_assert_eq!(e.order.width(), w);
            prop_assert!(e.order.center() > w);
            prop_assert_eq!(s.locate(e.block.lo as i64), s.position(e.label));
            prop_assert_eq!(s.locate(e.block.hi as i64), s.position(e.label));
        }
    }

    #[test]
    fn wrapped_angles_are_congruent(t in -1e6f64..1e6) {
        let w = wrap_angle(t);
        prop_assert!(w > -std::f64::consts::PI - 1e-12 && w <= std::f64::consts::PI + 1e-12);
        prop_assert!((Complex64::from_polar(1.0, w) - Complex64::from_polar(1.0, t)).norm() < 1e-6);
    }

    #[test]
    fn cantor_is_symmetric(p in 0i64..3i64.pow(8), k in 1u32..9) {
        let x = rational::Rational::new(p.into(), 3i64.pow(k).into());
        if x <= rational::int(1) {
            prop_assert_eq!(cantor::in_cantor(&x), cantor::in_cantor(&(rational::int(1) - &x)));
            // Thirding maps C into itself.
            if cantor::in_cantor(&x) {
                prop_assert!(cantor::in_cantor(&(&x / rational::int(3))));
            }
        }
    }
}

#[test]
fn exact_fejer_coefficients_sum_to_zero() {
    for big in 2..40 {
        for n in 1..big {
            let q = fejer::fejer_coeffs(FejerOrder::new(big, n).unwrap());
            let total = q.partial_sum_at_zero_exact(big + n).unwrap();
            assert!(total.is_zero());
        }
    }
}
