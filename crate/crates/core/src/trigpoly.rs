//! Sparse trigonometric polynomials `p(t) = Σ_k ĉ(k) e^{ikt}`.
//!
//! Coefficients are kept as doubles, and optionally as exact rationals when
//! the polynomial was built from exact data (Fejer blocks and their rational
//! rescalings). Exact parts survive scaling, addition and frequency shifts;
//! an argument shift by an arbitrary angle drops them.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::cis;
use crate::rational::{self, Rational};

/// Largest admissible `|k|`. Phase reduction stays exact below `2^53`.
pub const MAX_FREQUENCY: i64 = 1 << 52;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactComplex {
    pub re: Rational,
    pub im: Rational,
}

impl ExactComplex {
    pub fn real(re: Rational) -> Self {
        ExactComplex {
            re,
            im: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn from_f64(z: Complex64) -> Self {
        ExactComplex {
            re: rational::from_f64(z.re),
            im: rational::from_f64(z.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational::to_f64(&self.re), rational::to_f64(&self.im))
    }

    pub fn add(&self, o: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    /// `|z|` when it is rational, i.e. when `z` lies on an axis.
    pub fn abs_on_axis(&self) -> Option<Rational> {
        if self.im.is_zero() {
            Some(self.re.abs())
        } else if self.re.is_zero() {
            Some(self.im.abs())
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coeff {
    pub value: Complex64,
    pub exact: Option<ExactComplex>,
}

impl Coeff {
    pub fn exact(z: ExactComplex) -> Self {
        Coeff {
            value: z.to_complex(),
            exact: Some(z),
        }
    }

    pub fn approx(value: Complex64) -> Self {
        Coeff { value, exact: None }
    }

    fn is_zero(&self) -> bool {
        match &self.exact {
            Some(z) => z.is_zero(),
            None => self.value == Complex64::zero(),
        }
    }
}

/// Grid sup-norm estimate together with the sampling adequacy flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSup {
    pub value: f64,
    /// Fewer than `2·(hi − lo + 1)` grid points were used.
    pub undersampled: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<CoeffRecord>", try_from = "Vec<CoeffRecord>")]
pub struct TrigPoly {
    coeffs: BTreeMap<i64, Coeff>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_values([(0, c)]).expect("frequency 0 is admissible")
    }

    /// Build from `(k, value)` pairs; repeated frequencies are summed, zeros dropped.
    pub fn from_values(items: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let mut p = TrigPoly::zero();
        for (k, v) in items {
            check_frequency(k)?;
            check_finite(v)?;
            let entry = p
                .coeffs
                .entry(k)
                .or_insert(Coeff::approx(Complex64::zero()));
            entry.value += v;
            entry.exact = None;
        }
        p.prune();
        Ok(p)
    }

    /// Build from exact `(k, value)` pairs; repeated frequencies are summed.
    pub fn from_exact(items: impl IntoIterator<Item = (i64, ExactComplex)>) -> Result<Self> {
        let mut sums: BTreeMap<i64, ExactComplex> = BTreeMap::new();
        for (k, z) in items {
            check_frequency(k)?;
            let slot = sums.entry(k).or_insert_with(ExactComplex::zero);
            *slot = slot.add(&z);
        }
        let coeffs = sums
            .into_iter()
            .filter(|(_, z)| !z.is_zero())
            .map(|(k, z)| (k, Coeff::exact(z)))
            .collect();
        Ok(TrigPoly { coeffs })
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lo(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn hi(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `max |k|` over stored frequencies, 0 for the zero polynomial.
    pub fn degree(&self) -> u64 {
        match (self.lo(), self.hi()) {
            (Some(lo), Some(hi)) => lo.unsigned_abs().max(hi.unsigned_abs()),
            _ => 0,
        }
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).map_or(Complex64::zero(), |c| c.value)
    }

    pub fn coeff_entry(&self, k: i64) -> Option<&Coeff> {
        self.coeffs.get(&k)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, &Coeff)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn frequencies(&self) -> impl DoubleEndedIterator<Item = i64> + '_ {
        self.coeffs.keys().copied()
    }

    /// True when every coefficient carries an exact value.
    pub fn is_exact(&self) -> bool {
        self.coeffs.values().all(|c| c.exact.is_some())
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.coeffs.iter().map(|(&k, c)| c.value * cis(k, t)).sum()
    }

    /// `S_n(p, t) = Σ_{|k| ≤ n} ĉ(k) e^{ikt}`.
    pub fn partial_sum(&self, n: u64, t: f64) -> Complex64 {
        let n = n.min(MAX_FREQUENCY as u64) as i64;
        self.coeffs
            .range(-n..=n)
            .map(|(&k, c)| c.value * cis(k, t))
            .sum()
    }

    /// `S_n(p, t)` for every `n` in `ns` (ascending), in one pass over the spectrum.
    pub fn partial_sums_at(&self, t: f64, ns: &[u64]) -> Vec<Complex64> {
        debug_assert!(ns.windows(2).all(|w| w[0] <= w[1]));
        let mut pos = self.coeffs.range(0..).peekable();
        let mut neg = self.coeffs.range(..0).rev().peekable();
        let mut acc = Complex64::zero();
        let mut out = Vec::with_capacity(ns.len());
        for &n in ns {
            while let Some((&k, c)) = pos.next_if(|(&k, _)| k.unsigned_abs() <= n) {
                acc += c.value * cis(k, t);
            }
            while let Some((&k, c)) = neg.next_if(|(&k, _)| k.unsigned_abs() <= n) {
                acc += c.value * cis(k, t);
            }
            out.push(acc);
        }
        out
    }

    /// Exact `S_n(p, 0)`, available when all coefficients are exact.
    pub fn partial_sum_at_zero_exact(&self, n: u64) -> Option<ExactComplex> {
        let n = n.min(MAX_FREQUENCY as u64) as i64;
        let mut acc = ExactComplex::zero();
        for (_, c) in self.coeffs.range(-n..=n) {
            acc = acc.add(c.exact.as_ref()?);
        }
        Some(acc)
    }

    /// Cesaro mean `σ_n = (S_0 + … + S_n)/(n+1)`, i.e. the Fejer-weighted sum
    /// `Σ_{|k| ≤ n} (1 − |k|/(n+1)) ĉ(k) e^{ikt}`.
    pub fn cesaro_mean(&self, n: u64, t: f64) -> Complex64 {
        let n1 = (n + 1) as f64;
        let n = n.min(MAX_FREQUENCY as u64) as i64;
        self.coeffs
            .range(-n..=n)
            .map(|(&k, c)| c.value * cis(k, t) * (1.0 - k.unsigned_abs() as f64 / n1))
            .sum()
    }

    /// Lower bound on `sup_t |p(t)|` from the grid `t_i = 2πi/grid_points`.
    ///
    /// On this grid `e^{ikt_i}` depends only on `k mod grid_points`, so the
    /// spectrum is folded and evaluated with one inverse DFT.
    pub fn sup_norm_estimate(&self, grid_points: usize) -> GridSup {
        assert!(grid_points > 0, "grid must be nonempty");
        let span = match (self.lo(), self.hi()) {
            (Some(lo), Some(hi)) => (hi - lo + 1) as u128,
            _ => 0,
        };
        let undersampled = (grid_points as u128) < 2 * span;
        if self.is_zero() {
            return GridSup {
                value: 0.0,
                undersampled,
            };
        }
        let g = grid_points as i64;
        let mut buf = vec![Complex64::zero(); grid_points];
        for (&k, c) in &self.coeffs {
            buf[k.rem_euclid(g) as usize] += c.value;
        }
        inverse_dft(&mut buf);
        let value = buf.iter().map(|z| z.norm()).fold(0.0, f64::max);
        GridSup {
            value,
            undersampled,
        }
    }

    /// `Σ_m |ĉ(m−1) − ĉ(m)|` for `m` from `lo` to `hi + 1`.
    pub fn coeff_total_variation(&self) -> f64 {
        self.differences()
            .map(|(a, b)| (a.value_or_zero() - b.value_or_zero()).norm())
            .sum()
    }

    /// Exact total variation, when all coefficients are exact and every
    /// consecutive difference lies on the real or imaginary axis.
    pub fn coeff_total_variation_exact(&self) -> Option<Rational> {
        let zero = ExactComplex::zero();
        let mut acc = Rational::zero();
        for (a, b) in self.differences() {
            let a = a.exact_or(&zero)?;
            let b = b.exact_or(&zero)?;
            acc += a.sub(b).abs_on_axis()?;
        }
        Some(acc)
    }

    /// Consecutive `(ĉ(m−1), ĉ(m))` pairs over the support, with unstored
    /// frequencies reported as gaps. Runs of zeros contribute nothing and are skipped.
    fn differences(&self) -> impl Iterator<Item = (Slot<'_>, Slot<'_>)> + '_ {
        let mut out = Vec::new();
        let mut prev: Option<(i64, &Coeff)> = None;
        for (&k, c) in &self.coeffs {
            match prev {
                Some((pk, pc)) if pk + 1 == k => out.push((Slot::Stored(pc), Slot::Stored(c))),
                Some((_, pc)) => {
                    out.push((Slot::Stored(pc), Slot::Gap));
                    out.push((Slot::Gap, Slot::Stored(c)));
                }
                None => out.push((Slot::Gap, Slot::Stored(c))),
            }
            prev = Some((k, c));
        }
        if let Some((_, pc)) = prev {
            out.push((Slot::Stored(pc), Slot::Gap));
        }
        out.into_iter()
    }

    /// Multiply every coefficient by `s`. Exact parts are kept (the double
    /// `s` is itself an exact dyadic rational).
    pub fn scale(&self, s: Complex64) -> TrigPoly {
        self.scale_exact(&ExactComplex::from_f64(s), s)
    }

    /// Multiply by an exact scalar; `approx` is its double projection.
    pub fn scale_exact(&self, s: &ExactComplex, approx: Complex64) -> TrigPoly {
        let mut coeffs = BTreeMap::new();
        for (&k, c) in &self.coeffs {
            let coeff = match &c.exact {
                Some(z) => Coeff::exact(z.mul(s)),
                None => Coeff::approx(c.value * approx),
            };
            coeffs.insert(k, coeff);
        }
        let mut p = TrigPoly { coeffs };
        p.prune();
        p
    }

    /// `e^{i·shift·t}·p(t)`: every frequency moves by `shift`.
    pub fn modulate(&self, shift: i64) -> Result<TrigPoly> {
        let mut coeffs = BTreeMap::new();
        for (&k, c) in &self.coeffs {
            let nk = k
                .checked_add(shift)
                .ok_or_else(|| Error::invalid("frequency overflow"))?;
            check_frequency(nk)?;
            coeffs.insert(nk, c.clone());
        }
        Ok(TrigPoly { coeffs })
    }

    /// `p(t − t0)`: coefficient `ĉ(k)` becomes `ĉ(k)·e^{−ikt0}`.
    pub fn shift_argument(&self, t0: f64) -> TrigPoly {
        if t0 == 0.0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, c)| (k, Coeff::approx(c.value * cis(-k, t0))))
            .collect();
        let mut p = TrigPoly { coeffs };
        p.prune();
        p
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let mut coeffs = self.coeffs.clone();
        for (&k, c) in &other.coeffs {
            match coeffs.get_mut(&k) {
                None => {
                    coeffs.insert(k, c.clone());
                }
                Some(slot) => {
                    let exact = match (&slot.exact, &c.exact) {
                        (Some(a), Some(b)) => Some(a.add(b)),
                        _ => None,
                    };
                    *slot = match exact {
                        Some(z) => Coeff::exact(z),
                        None => Coeff::approx(slot.value + c.value),
                    };
                }
            }
        }
        let mut p = TrigPoly { coeffs };
        p.prune();
        p
    }

    /// `ĉ(−k) = conj(ĉ(k))` for all `k` (exact comparison of the stored doubles).
    pub fn is_conjugate_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(&k, c)| {
            self.coeffs
                .get(&-k)
                .is_some_and(|d| d.value == c.value.conj())
        })
    }
}

enum Slot<'a> {
    Stored(&'a Coeff),
    Gap,
}

impl Slot<'_> {
    fn value_or_zero(&self) -> Complex64 {
        match self {
            Slot::Stored(c) => c.value,
            Slot::Gap => Complex64::zero(),
        }
    }

    fn exact_or<'b>(&'b self, zero: &'b ExactComplex) -> Option<&'b ExactComplex> {
        match self {
            Slot::Stored(c) => c.exact.as_ref(),
            Slot::Gap => Some(zero),
        }
    }
}

fn check_frequency(k: i64) -> Result<()> {
    if k.unsigned_abs() > MAX_FREQUENCY as u64 {
        return Err(Error::invalid(format!(
            "frequency {k} exceeds {MAX_FREQUENCY}"
        )));
    }
    Ok(())
}

fn check_finite(v: Complex64) -> Result<()> {
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::invalid("non-finite coefficient"));
    }
    Ok(())
}

type PlanCache = (FftPlanner<f64>, BTreeMap<usize, Arc<dyn Fft<f64>>>);

thread_local! {
    static PLANNER: RefCell<PlanCache> =
        RefCell::new((FftPlanner::new(), BTreeMap::new()));
}

fn inverse_dft(buf: &mut [Complex64]) {
    let fft = PLANNER.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        cache
            .entry(buf.len())
            .or_insert_with(|| planner.plan_fft_inverse(buf.len()))
            .clone()
    });
    fft.process(buf);
}

/// Decimal rendering used by every text output: 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub k: i64,
    pub re: String,
    pub im: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re_exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im_exact: Option<String>,
}

impl From<TrigPoly> for Vec<CoeffRecord> {
    fn from(p: TrigPoly) -> Self {
        p.coeffs
            .into_iter()
            .map(|(k, c)| CoeffRecord {
                k,
                re: fmt_real(c.value.re),
                im: fmt_real(c.value.im),
                re_exact: c.exact.as_ref().map(|z| rational::format(&z.re)),
                im_exact: c.exact.as_ref().map(|z| rational::format(&z.im)),
            })
            .collect()
    }
}

impl TryFrom<Vec<CoeffRecord>> for TrigPoly {
    type Error = Error;

    fn try_from(records: Vec<CoeffRecord>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for r in records {
            check_frequency(r.k)?;
            let exact = match (&r.re_exact, &r.im_exact) {
                (Some(re), Some(im)) => Some(ExactComplex {
                    re: rational::parse(re)?,
                    im: rational::parse(im)?,
                }),
                (None, None) => None,
                _ => return Err(Error::invalid("re_exact and im_exact must come together")),
            };
            let coeff = match exact {
                Some(z) => Coeff::exact(z),
                None => {
                    let parse = |s: &str| {
                        s.parse::<f64>()
                            .map_err(|_| Error::invalid(format!("bad decimal {s:?}")))
                    };
                    let v = Complex64::new(parse(&r.re)?, parse(&r.im)?);
                    check_finite(v)?;
                    Coeff::approx(v)
                }
            };
            if coeffs.insert(r.k, coeff).is_some() {
                return Err(Error::invalid(format!("duplicate frequency {}", r.k)));
            }
        }
        let mut p = TrigPoly { coeffs };
        p.prune();
        Ok(p)
    }
}
