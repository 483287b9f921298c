//! Exact geometry of the ternary Cantor set `C ⊂ [0, 1]`.
//!
//! Stage `D` consists of `2^D` closed intervals `[s/3^D, (s+1)/3^D]`; every
//! endpoint of every stage belongs to `C`. All arithmetic is exact.

use std::collections::HashSet;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest depth with `3^D ≤ 2^63`.
pub const MAX_DEPTH: u32 = 39;
/// Largest depth whose `2^D` intervals are materialized as a list.
pub const MAX_LISTED_DEPTH: u32 = 24;

fn check_depth(depth: u32) -> Result<()> {
    if depth > MAX_DEPTH {
        return Err(Error::invalid(format!(
            "depth {depth} exceeds the cap {MAX_DEPTH} (3^D <= 2^63)"
        )));
    }
    Ok(())
}

fn pow3_u64(e: u32) -> u64 {
    3u64.pow(e)
}

/// Stage `D`: numerators `s` of the intervals `[s/3^D, (s+1)/3^D]`, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CantorStage {
    pub depth: u32,
    pub starts: Vec<u64>,
}

impl CantorStage {
    pub fn new(depth: u32) -> Result<Self> {
        check_depth(depth)?;
        if depth > MAX_LISTED_DEPTH {
            return Err(Error::invalid(format!(
                "stage {depth} has too many intervals to list (cap {MAX_LISTED_DEPTH})"
            )));
        }
        let mut starts = vec![0u64];
        for _ in 0..depth {
            starts = starts.iter().flat_map(|&s| [3 * s, 3 * s + 2]).collect();
        }
        Ok(CantorStage { depth, starts })
    }

    pub fn denominator(&self) -> u64 {
        pow3_u64(self.depth)
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    /// The intervals as exact rationals.
    pub fn intervals(&self) -> Vec<(Rational, Rational)> {
        let d = self.denominator() as i64;
        self.starts
            .iter()
            .map(|&s| (rational::rat(s as i64, d), rational::rat(s as i64 + 1, d)))
            .collect()
    }
}

/// Whether `[lo, hi]` meets the stage-`depth` set.
///
/// `false` certifies `[lo, hi] ∩ C = ∅`. The search descends only into stage
/// intervals that straddle an end of `[lo, hi]`; a stage interval lying
/// inside `[lo, hi]` already contributes its endpoints, which are in `C`.
pub fn interval_hits_cantor(lo: &Rational, hi: &Rational, depth: u32) -> Result<bool> {
    check_depth(depth)?;
    if lo > hi {
        return Err(Error::invalid("interval must satisfy lo <= hi"));
    }
    Ok(hits(lo, hi, BigInt::zero(), 0, depth))
}

fn hits(lo: &Rational, hi: &Rational, start: BigInt, level: u32, depth: u32) -> bool {
    let den = rational::pow3(level);
    let a = Rational::new(start.clone(), den.clone());
    let b = Rational::new(&start + 1, den);
    if &b < lo || &a > hi {
        return false;
    }
    if level == depth || (lo <= &a && &b <= hi) {
        return true;
    }
    let left = &start * 3;
    let right = &left + 2;
    hits(lo, hi, left, level + 1, depth) || hits(lo, hi, right, level + 1, depth)
}

/// Exact membership of a rational in `C`, by following its orbit under the
/// two inverse branches `x ↦ 3x` and `x ↦ 3x − 2`. The orbit of a rational
/// with denominator `q` stays among finitely many values, so it either leaves
/// the two outer thirds (not in `C`) or revisits a state (in `C`).
pub fn in_cantor(x: &Rational) -> bool {
    let one = Rational::one();
    let third = rational::rat(1, 3);
    let two_thirds = rational::rat(2, 3);
    let mut seen = HashSet::new();
    let mut x = x.clone();
    loop {
        if x.is_negative() || x > one {
            return false;
        }
        if !seen.insert(x.clone()) {
            return true;
        }
        x = if x <= third {
            x * rational::int(3)
        } else if x >= two_thirds {
            x * rational::int(3) - rational::int(2)
        } else {
            return false;
        };
    }
}

/// Membership of `num/3^k` in `C` from its `k`-digit ternary expansion: in `C`
/// iff the digits avoid 1, or the only 1 is the final nonzero digit (then the
/// expansion `…1` equals `…0222…`).
pub fn ternary_fraction_in_cantor(num: &BigInt, k: u32) -> bool {
    let den = rational::pow3(k);
    if num.is_negative() || num > &den {
        return false;
    }
    if num == &den {
        return true;
    }
    let mut digits = Vec::with_capacity(k as usize);
    let mut rest = num.clone();
    let three = BigInt::from(3);
    for _ in 0..k {
        let (q, r) = rest.div_rem(&three);
        digits.push(r.to_u8().unwrap_or(0));
        rest = q;
    }
    digits.reverse();
    let last_nonzero = digits.iter().rposition(|&d| d != 0);
    digits
        .iter()
        .enumerate()
        .all(|(i, &d)| d != 1 || Some(i) == last_nonzero)
}

/// A point of `C` given by ternary digits in `{0, 2}`, optionally continued
/// by a repeating digit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernaryPoint {
    pub digits: Vec<u8>,
    /// Digit repeated forever after the prefix (`None`: only the prefix is known).
    #[serde(default)]
    pub repeat: Option<u8>,
}

impl TernaryPoint {
    pub fn new(digits: Vec<u8>, repeat: Option<u8>) -> Result<Self> {
        if digits
            .iter()
            .chain(repeat.iter())
            .any(|&d| d != 0 && d != 2)
        {
            return Err(Error::invalid(
                "ternary digits of a Cantor point must be 0 or 2",
            ));
        }
        Ok(TernaryPoint { digits, repeat })
    }

    /// `0 = 0.000…`.
    pub fn zero() -> Self {
        TernaryPoint {
            digits: Vec::new(),
            repeat: Some(0),
        }
    }

    /// `1 = 0.222…`.
    pub fn one() -> Self {
        TernaryPoint {
            digits: Vec::new(),
            repeat: Some(2),
        }
    }

    /// The `i`-th digit (1-based), if known.
    pub fn digit(&self, i: usize) -> Option<u8> {
        self.digits.get(i.checked_sub(1)?).copied().or(self.repeat)
    }

    /// Number of known digits (`usize::MAX` with a repeating tail).
    pub fn resolution(&self) -> usize {
        if self.repeat.is_some() {
            usize::MAX
        } else {
            self.digits.len()
        }
    }

    /// Exact value.
    pub fn value(&self) -> Rational {
        let mut v = Rational::zero();
        for (i, &d) in self.digits.iter().enumerate() {
            v += Rational::new(BigInt::from(d), rational::pow3(i as u32 + 1));
        }
        if let Some(d) = self.repeat {
            // Σ_{i > L} d·3^{−i} = (d/2)·3^{−L}.
            v += Rational::new(
                BigInt::from(d),
                rational::pow3(self.digits.len() as u32) * 2,
            );
        }
        v
    }

    /// Numerator `s` of the stage-`N` interval `[s/3^N, (s+1)/3^N]` containing the point.
    pub fn stage_start(&self, stage: u32) -> Result<BigInt> {
        let mut s = BigInt::zero();
        for i in 1..=stage as usize {
            let d = self.digit(i).ok_or(Error::PrefixTooShort {
                have: self.digits.len(),
                need: stage as usize,
            })?;
            s = s * 3 + d;
        }
        Ok(s)
    }
}

/// `N` with `3^N ≤ x < 3^{N+1}` for `x ≥ 1`.
fn log3_floor(x: &Rational) -> Option<u32> {
    if x < &Rational::one() {
        return None;
    }
    let mut n = 0u32;
    while Rational::from_integer(rational::pow3(n + 1)) <= *x {
        n += 1;
    }
    Some(n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u64,
    /// `N` with `3^N ≤ n/b < 3^{N+1}` (`None` when `n < b`).
    pub big_n: Option<u32>,
    /// `1/3^{N+1}` or `2/3^{N+1}` when one of them lies in `(a/n, b/n)`.
    #[serde(with = "opt_rational")]
    pub hit_point: Option<Rational>,
    /// `interval_hits_cantor(a/n, b/n, N + 2)`.
    pub hit: bool,
}

impl SweepRow {
    pub fn agrees(&self) -> bool {
        self.hit_point.is_some() == self.hit
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Indices with no certified hit point.
    pub misses: Vec<u64>,
    /// Indices where the point test and the interval test disagree.
    pub disagreements: Vec<u64>,
}

/// For each `n` in `n_min..=n_max`, look for `1/3^{N+1}` or `2/3^{N+1}` in
/// `(a/n, b/n)` and cross-check with the interval search at depth `N + 2`.
pub fn property20_sweep(a: &Rational, b: &Rational, n_min: u64, n_max: u64) -> Result<SweepReport> {
    if !(a.is_positive() && a < b) {
        return Err(Error::invalid("need 0 < a < b"));
    }
    if n_min == 0 || n_min > n_max {
        return Err(Error::invalid("need 1 <= n_min <= n_max"));
    }
    let mut rows = Vec::with_capacity((n_max - n_min + 1) as usize);
    for n in n_min..=n_max {
        let nn = Rational::from_integer(BigInt::from(n));
        let lo = a / &nn;
        let hi = b / &nn;
        let big_n = log3_floor(&(&nn / b));
        let hit_point = big_n.and_then(|k| {
            let den = rational::pow3(k + 1);
            [1, 2]
                .into_iter()
                .map(|p| Rational::new(BigInt::from(p), den.clone()))
                .find(|x| &lo < x && x < &hi)
        });
        let hit = interval_hits_cantor(&lo, &hi, big_n.map_or(2, |k| k + 2))?;
        rows.push(SweepRow {
            n,
            big_n,
            hit_point,
            hit,
        });
    }
    let misses = rows
        .iter()
        .filter(|r| r.hit_point.is_none())
        .map(|r| r.n)
        .collect();
    let disagreements = rows.iter().filter(|r| !r.agrees()).map(|r| r.n).collect();
    Ok(SweepReport {
        rows,
        misses,
        disagreements,
    })
}

pub fn write_sweep_csv(report: &SweepReport, mut out: impl Write) -> Result<()> {
    writeln!(out, "n,N,hit_point,hit")?;
    for r in &report.rows {
        let big_n = r.big_n.map(|k| k.to_string()).unwrap_or_default();
        let point = r
            .hit_point
            .as_ref()
            .map(rational::format)
            .unwrap_or_default();
        writeln!(out, "{},{},{},{}", r.n, big_n, point, r.hit)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Property21Checks {
    pub t_n_in_cantor: bool,
    pub minus_in_cantor: bool,
    pub plus_in_cantor: bool,
    /// `a/n < θ < b/n`.
    pub window: bool,
}

impl Property21Checks {
    pub fn all(&self) -> bool {
        self.t_n_in_cantor && self.minus_in_cantor && self.plus_in_cantor && self.window
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Property21 {
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u32,
    /// The stage-`N` interval containing `t0`.
    #[serde(with = "pair_rational")]
    pub interval: (Rational, Rational),
    /// Whether `t0` lies in the right half `I_{N,+}`.
    pub right_half: bool,
    #[serde(with = "rational_str")]
    pub t_n: Rational,
    #[serde(with = "rational_str")]
    pub theta: Rational,
    pub checks: Property21Checks,
}

/// The point `t_n` and step `θ = 3^{−(N+1)}` for which `t_n` and `t_n ± θ`
/// all lie in `C`, where `3^N·b ≤ n < 3^{N+1}·b`.
pub fn property21_construct(
    t0: &TernaryPoint,
    a: &Rational,
    b: &Rational,
    n: u64,
) -> Result<Property21> {
    if !(a.is_positive() && *b > a * rational::int(3)) {
        return Err(Error::invalid("need a > 0 and b/a > 3"));
    }
    let nn = Rational::from_integer(BigInt::from(n));
    let big_n = log3_floor(&(&nn / b)).ok_or_else(|| Error::invalid("need n >= b"))?;
    check_depth(big_n + 1)?;
    if t0.resolution() < big_n as usize + 1 {
        return Err(Error::PrefixTooShort {
            have: t0.digits.len(),
            need: big_n as usize + 1,
        });
    }
    let start = t0.stage_start(big_n)?;
    let right_half = t0.digit(big_n as usize + 1) == Some(2);
    // Work in units of 3^{−(N+1)}: I_N = [3s, 3s + 3].
    let k = big_n + 1;
    let base = &start * 3;
    let t_num = &base + if right_half { 2 } else { 1 };
    let den = rational::pow3(k);
    let at = |num: &BigInt| Rational::new(num.clone(), den.clone());
    let minus = &t_num - 1;
    let plus = &t_num + 1;
    let theta = Rational::new(BigInt::one(), den.clone());
    let checks = Property21Checks {
        t_n_in_cantor: ternary_fraction_in_cantor(&t_num, k),
        minus_in_cantor: ternary_fraction_in_cantor(&minus, k),
        plus_in_cantor: ternary_fraction_in_cantor(&plus, k),
        window: a / &nn < theta && theta < b / &nn,
    };
    Ok(Property21 {
        n,
        big_n,
        interval: (at(&base), at(&(&base + 3))),
        right_half,
        t_n: at(&t_num),
        theta,
        checks,
    })
}

/// Stage-`D` intervals of `C* = C ∪ (−C)`, ascending.
pub fn symmetric_double(depth: u32) -> Result<Vec<(Rational, Rational)>> {
    let stage = CantorStage::new(depth)?;
    let pos = stage.intervals();
    let mut out: Vec<(Rational, Rational)> = pos.iter().rev().map(|(a, b)| (-b, -a)).collect();
    out.extend(pos);
    Ok(out)
}

mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        rational::parse(&text).map_err(serde::de::Error::custom)
    }
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        q: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&rational::format(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| rational::parse(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

mod pair_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        q: &(Rational, Rational),
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        [rational::format(&q.0), rational::format(&q.1)].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<(Rational, Rational), D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        let p = |t: &str| rational::parse(t).map_err(serde::de::Error::custom);
        Ok((p(&a)?, p(&b)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stages_nest() {
        let mut prev = CantorStage::new(0).unwrap();
        assert_eq!(prev.intervals(), vec![(rat(0, 1), rat(1, 1))]);
        for d in 1..=12 {
            let stage = CantorStage::new(d).unwrap();
            assert_eq!(stage.len(), 1 << d);
            // Each child [s/3^D, (s+1)/3^D] sits in exactly one parent.
            for &s in &stage.starts {
                let parents = prev
                    .starts
                    .iter()
                    .filter(|&&p| 3 * p <= s && s < 3 * p + 3)
                    .count();
                assert_eq!(parents, 1);
            }
            assert!(stage.starts.windows(2).all(|w| w[0] + 1 < w[1]));
            prev = stage;
        }
        assert!(CantorStage::new(MAX_LISTED_DEPTH + 1).is_err());
        assert!(interval_hits_cantor(&rat(0, 1), &rat(1, 1), MAX_DEPTH + 1).is_err());
    }

    #[test]
    fn interval_examples() {
        assert!(!interval_hits_cantor(&rat(2, 5), &rat(1, 2), 1).unwrap());
        for d in [0, 1, 5, 20, 39] {
            assert!(interval_hits_cantor(&rat(0, 1), &rat(1, 9), d).unwrap());
        }
        assert!(interval_hits_cantor(&rat(2, 15), &rat(5, 15), 2).unwrap());
        // (1/3, 2/3) is a gap at every depth ≥ 1, but its closure touches C.
        assert!(!interval_hits_cantor(&rat(4, 10), &rat(6, 10), 30).unwrap());
        assert!(interval_hits_cantor(&rat(1, 3), &rat(1, 3), 30).unwrap());
        assert!(interval_hits_cantor(&rat(1, 2), &rat(1, 3), 1).is_err());
    }

    #[test]
    fn interval_search_against_stage_scan() {
        let stage = CantorStage::new(6).unwrap();
        let ivs = stage.intervals();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let a = rng.gen_range(0..1000);
            let w = rng.gen_range(0..60);
            let (lo, hi) = (rat(a, 1000), rat(a + w, 1000));
            let oracle = ivs.iter().any(|(p, q)| p <= &hi && &lo <= q);
            assert_eq!(
                interval_hits_cantor(&lo, &hi, 6).unwrap(),
                oracle,
                "[{lo}, {hi}]"
            );
        }
    }

    #[test]
    fn endpoints_are_members_at_deeper_depths() {
        for d in 0..=5u32 {
            for (a, b) in CantorStage::new(d).unwrap().intervals() {
                for deeper in d..=d + 6 {
                    assert!(interval_hits_cantor(&a, &a, deeper).unwrap());
                    assert!(interval_hits_cantor(&b, &b, deeper).unwrap());
                }
                assert!(in_cantor(&a) && in_cantor(&b));
            }
        }
    }

    #[test]
    fn membership_oracles_agree() {
        assert!(in_cantor(&rat(1, 4)));
        assert!(in_cantor(&rat(3, 4)));
        assert!(!in_cantor(&rat(1, 2)));
        assert!(!in_cantor(&rat(-1, 9)));
        let k = 6;
        let den = 3i64.pow(k);
        for num in 0..=den {
            let q = rat(num, den);
            assert_eq!(
                ternary_fraction_in_cantor(&BigInt::from(num), k),
                in_cantor(&q),
                "{q}"
            );
        }
    }

    #[test]
    fn ternary_points() {
        assert_eq!(TernaryPoint::zero().value(), rat(0, 1));
        assert_eq!(TernaryPoint::one().value(), rat(1, 1));
        let p = TernaryPoint::new(vec![2, 0, 2], None).unwrap();
        assert_eq!(p.value(), rat(20, 27));
        assert_eq!(p.stage_start(2).unwrap(), BigInt::from(6));
        assert!(matches!(
            p.stage_start(4),
            Err(Error::PrefixTooShort { have: 3, need: 4 })
        ));
        assert!(TernaryPoint::new(vec![1], None).is_err());
        // The stage-N interval really contains the point.
        let q = TernaryPoint::new(vec![0, 2, 2, 0], Some(2)).unwrap();
        for n in 0..8 {
            let s = q.stage_start(n).unwrap();
            let den = rational::pow3(n);
            let v = q.value();
            assert!(Rational::new(s.clone(), den.clone()) <= v && v <= Rational::new(s + 1, den));
        }
    }

    #[test]
    fn sweep_examples() {
        let r = property20_sweep(&rat(2, 1), &rat(5, 1), 15, 15).unwrap();
        assert_eq!(r.rows[0].big_n, Some(1));
        assert_eq!(r.rows[0].hit_point, Some(rat(2, 9)));
        assert!(r.rows[0].hit);
        let r = property20_sweep(&rat(2, 1), &rat(5, 1), 15, 2000).unwrap();
        assert!(r.misses.is_empty());
        assert!(r.disagreements.is_empty());
        // Ratio below 2: the report is still well formed.
        let r = property20_sweep(&rat(1, 1), &rat(3, 2), 2, 300).unwrap();
        assert_eq!(r.rows.len(), 299);
        let mut csv = Vec::new();
        write_sweep_csv(&r, &mut csv).unwrap();
        assert!(String::from_utf8(csv)
            .unwrap()
            .starts_with("n,N,hit_point,hit\n"));
    }

    #[test]
    fn construction_worked_examples() {
        let (a, b) = (rat(1, 1), rat(4, 1));
        let p = property21_construct(&TernaryPoint::zero(), &a, &b, 12).unwrap();
        assert_eq!(p.big_n, 1);
        assert_eq!(p.interval, (rat(0, 1), rat(1, 3)));
        assert_eq!((p.t_n.clone(), p.theta.clone()), (rat(1, 9), rat(1, 9)));
        assert!(p.checks.all());
        let p = property21_construct(&TernaryPoint::one(), &a, &b, 12).unwrap();
        assert_eq!((p.t_n.clone(), p.theta.clone()), (rat(8, 9), rat(1, 9)));
        for x in [rat(7, 9), rat(8, 9), rat(1, 1)] {
            assert!(in_cantor(&x));
        }
        assert!(p.checks.all());
        let short = TernaryPoint::new(vec![0], None).unwrap();
        assert!(matches!(
            property21_construct(&short, &a, &b, 12),
            Err(Error::PrefixTooShort { .. })
        ));
        assert!(property21_construct(&TernaryPoint::zero(), &a, &rat(3, 1), 12).is_err());
    }

    #[test]
    fn construction_random_against_orbit_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let (a, b) = (rat(1, 1), rat(4, 1));
        for _ in 0..100 {
            let digits: Vec<u8> = (0..30).map(|_| if rng.gen() { 2 } else { 0 }).collect();
            let t0 = TernaryPoint::new(digits, None).unwrap();
            let n = rng.gen_range(4..1_000_000_000u64);
            let p = property21_construct(&t0, &a, &b, n).unwrap();
            assert!(p.checks.all());
            assert!(in_cantor(&p.t_n));
            assert!(in_cantor(&(&p.t_n - &p.theta)) && in_cantor(&(&p.t_n + &p.theta)));
            let v = t0.value();
            assert!(p.interval.0 <= v && v <= p.interval.1);
        }
    }

    #[test]
    fn symmetric_set() {
        let d0 = symmetric_double(0).unwrap();
        assert_eq!(d0, vec![(rat(-1, 1), rat(0, 1)), (rat(0, 1), rat(1, 1))]);
        let d1 = symmetric_double(1).unwrap();
        assert_eq!(d1.len(), 4);
        assert_eq!(d1[3], (rat(2, 3), rat(1, 1)));
        for d in 0..6 {
            let s = symmetric_double(d).unwrap();
            let mirrored: Vec<_> = s.iter().rev().map(|(a, b)| (-b, -a)).collect();
            assert_eq!(s, mirrored);
        }
    }

    #[test]
    fn construction_json_round_trip() {
        let p = property21_construct(&TernaryPoint::zero(), &rat(1, 1), &rat(4, 1), 12).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"t_n\":\"1/9\""));
        let back: Property21 = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}
