//! Truncated universal series.
//!
//! Every block `j` carries `P_j(t) = e^{2iN_j t}·P_{N_j,n_j}(t)`, shifted to
//! each universality point `t_l` by `t ↦ t − t_l`. Blocks are pairwise
//! disjoint, so each coefficient of the assembled series comes from at most
//! one term.
//!
//! Checkpoints. The one-sided partial sum `S_{3N}` of a modulated block keeps
//! every coefficient of `P_{N,n}` with frequency `≤ N`, whose total is half
//! the resonance `S_N(P_{N,n}, 0)`. Each block is therefore scaled to the
//! resonance target `2c_j`, which makes `S_{3N_j}(g, t_0) = c_j` exact.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::budget::EpsRule;
use crate::dense::TargetEnum;
use crate::error::{Error, Result};
use crate::fejer::{self, FejerOrder, Mode, ScaledFejerSpec, KAPPA_DEFAULT, ORDER_CAP_DEFAULT};
use crate::phase::{cis, wrap_angle};
use crate::schedule::{BlockSchedule, Label, ScheduleEntry, FREQ_CAP_DEFAULT};
use crate::trigpoly::TrigPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    /// One point, blocks `j = 1..J`.
    Single,
    /// Finitely many points sharing each block's order, blocks `j = 1..J`.
    Finite,
    /// Point sequence `t_1, t_2, …`; row `m` uses the prefix `E_m`, blocks in diagonal order.
    Countable,
}

fn default_relaxed_order() -> u64 {
    7
}
fn default_kappa() -> f64 {
    KAPPA_DEFAULT
}
fn default_freq_cap() -> i64 {
    FREQ_CAP_DEFAULT
}
fn default_order_cap() -> u64 {
    ORDER_CAP_DEFAULT
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub points: Vec<f64>,
    #[serde(default)]
    pub eps: EpsRule,
    /// `J` blocks (single, finite) or `D` diagonals (countable).
    pub truncation: usize,
    pub mode: Mode,
    /// Order `n` used for every block in relaxed mode.
    #[serde(default = "default_relaxed_order")]
    pub relaxed_order: u64,
    #[serde(default)]
    pub targets: TargetEnum,
    #[serde(default)]
    pub margin: u64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_freq_cap")]
    pub freq_cap: i64,
    #[serde(default = "default_order_cap")]
    pub order_cap: u64,
}

impl SeriesSpec {
    pub fn new(kind: SeriesKind, points: Vec<f64>, truncation: usize, mode: Mode) -> Self {
        SeriesSpec {
            kind,
            points,
            eps: EpsRule::default(),
            truncation,
            mode,
            relaxed_order: default_relaxed_order(),
            targets: TargetEnum::default(),
            margin: 0,
            kappa: KAPPA_DEFAULT,
            freq_cap: FREQ_CAP_DEFAULT,
            order_cap: ORDER_CAP_DEFAULT,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::invalid(
                "at least one universality point is required",
            ));
        }
        if self.truncation == 0 {
            return Err(Error::invalid("truncation depth must be positive"));
        }
        if self.points.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("points must be finite"));
        }
        for (i, &a) in self.points.iter().enumerate() {
            for (j, &b) in self.points.iter().enumerate().skip(i + 1) {
                if wrap_angle(a - b).abs() <= 1e-12 {
                    return Err(Error::invalid(format!(
                        "points {} and {} coincide modulo 2π",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        self.eps.validate(false)?;
        if self.relaxed_order == 0 {
            return Err(Error::invalid("relaxed order must be at least 1"));
        }
        if !(self.kappa > 0.0) || !self.targets.scale.is_finite() {
            return Err(Error::invalid(
                "kappa must be positive and the target scale finite",
            ));
        }
        Ok(())
    }
}

/// The part of a block attached to one universality point.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    /// 0-based index into `spec.points`.
    pub point: usize,
    /// Checkpoint value `c` consumed from the dense stream.
    pub target: Complex64,
    pub poly: TrigPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub label: Label,
    pub order: FejerOrder,
    pub eps: f64,
    pub components: Vec<Component>,
    /// Sum of the components; its spectrum lies inside the block.
    pub poly: TrigPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub label: Label,
    pub n: u64,
    /// `(point index, value)`: `S_n` of this block's own component at its point.
    pub expected: Vec<(usize, Complex64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniversalSeries {
    pub spec: SeriesSpec,
    pub schedule: BlockSchedule,
    /// Aligned with `schedule.entries()`.
    pub terms: Vec<Term>,
    /// Σ of the budgets of every omitted block.
    pub tail_bound: f64,
    pub checkpoints: Vec<Checkpoint>,
}

/// Build the components of one block for the points `points[..count]`.
fn block_term(
    spec: &SeriesSpec,
    label: Label,
    order: FejerOrder,
    eps: f64,
    targets: &[Complex64],
) -> Result<Term> {
    let shift = 2 * order.center() as i64;
    let mut components = Vec::with_capacity(targets.len());
    let mut poly = TrigPoly::zero();
    for (l, &c) in targets.iter().enumerate() {
        let p = fejer::scaled_fejer(&ScaledFejerSpec {
            order,
            target: 2.0 * c,
            eps,
            mode: spec.mode,
        })?;
        let p = p.modulate(shift)?.shift_argument(spec.points[l]);
        poly = poly.add(&p);
        components.push(Component {
            point: l,
            target: c,
            poly: p,
        });
    }
    Ok(Term {
        label,
        order,
        eps,
        components,
        poly,
    })
}

fn block_width(spec: &SeriesSpec, targets: &[Complex64], eps: f64) -> Result<u64> {
    match spec.mode {
        Mode::Relaxed => Ok(spec.relaxed_order),
        Mode::Strict => {
            let largest = targets.iter().map(|c| c.norm()).fold(0.0, f64::max);
            fejer::pick_order_capped(
                Complex64::new(2.0 * largest, 0.0),
                eps,
                spec.kappa,
                spec.order_cap,
            )
        }
    }
}

/// One-point build `g(t − t0) = Σ_j P_j(t − t0)`.
pub fn build_single_point(spec: &SeriesSpec) -> Result<UniversalSeries> {
    if spec.points.len() != 1 {
        return Err(Error::invalid(
            "a single-point build takes exactly one point",
        ));
    }
    let mut s = build_blocks(spec)?;
    s.spec.kind = SeriesKind::Single;
    Ok(s)
}

/// `f = f_1 + … + f_m` for `K = {t_1, …, t_m}` with shared block orders.
pub fn build_finite(spec: &SeriesSpec) -> Result<UniversalSeries> {
    let mut s = build_blocks(spec)?;
    s.spec.kind = SeriesKind::Finite;
    Ok(s)
}

fn build_blocks(spec: &SeriesSpec) -> Result<UniversalSeries> {
    spec.validate()?;
    let dim = spec.points.len();
    let mut schedule = BlockSchedule::default();
    let mut terms = Vec::with_capacity(spec.truncation);
    let mut checkpoints = Vec::with_capacity(spec.truncation);
    for j in 1..=spec.truncation {
        let targets = spec.targets.point(j as u64, dim)?;
        let eps = spec.eps.single(j);
        let width = block_width(spec, &targets, eps)?;
        let label = Label::Index { j };
        let entry = *schedule.push(label, width, spec.margin, spec.freq_cap)?;
        checkpoints.push(checkpoint_of(&entry, &targets));
        terms.push(block_term(spec, label, entry.order, eps, &targets)?);
    }
    Ok(UniversalSeries {
        spec: spec.clone(),
        schedule,
        terms,
        tail_bound: spec.eps.finite_tail(spec.truncation),
        checkpoints,
    })
}

/// `f = Σ_m f_m` with the blocks of all rows interleaved diagonally.
///
/// Row `m` is built on the prefix `E_m = {t_1, …, t_m}`; when fewer than `m`
/// points are supplied the row uses all of them.
pub fn build_countable(spec: &SeriesSpec) -> Result<UniversalSeries> {
    spec.validate()?;
    let diagonals = spec.truncation;
    let mut schedule = BlockSchedule::default();
    let mut terms = Vec::new();
    let mut checkpoints = Vec::new();
    for label in crate::schedule::diagonal_labels(diagonals) {
        let (m, j) = (label.row(), label.col());
        let dim = m.min(spec.points.len());
        let targets = spec.targets.point(j as u64, dim)?;
        let eps = spec.eps.pair(m, j);
        let width = block_width(spec, &targets, eps)?;
        let entry = *schedule.push(label, width, spec.margin, spec.freq_cap)?;
        checkpoints.push(checkpoint_of(&entry, &targets));
        terms.push(block_term(spec, label, entry.order, eps, &targets)?);
    }
    let mut spec = spec.clone();
    spec.kind = SeriesKind::Countable;
    let tail_bound = spec.eps.diagonal_tail(diagonals);
    Ok(UniversalSeries {
        spec,
        schedule,
        terms,
        tail_bound,
        checkpoints,
    })
}

/// Dispatch on `spec.kind`.
pub fn build(spec: &SeriesSpec) -> Result<UniversalSeries> {
    match spec.kind {
        SeriesKind::Single => build_single_point(spec),
        SeriesKind::Finite => build_finite(spec),
        SeriesKind::Countable => build_countable(spec),
    }
}

fn checkpoint_of(entry: &ScheduleEntry, targets: &[Complex64]) -> Checkpoint {
    Checkpoint {
        label: entry.label,
        n: entry.checkpoint(),
        expected: targets.iter().copied().enumerate().collect(),
    }
}

impl UniversalSeries {
    pub fn entries(&self) -> &[ScheduleEntry] {
        self.schedule.entries()
    }

    /// `ĝ(k)`: zero for negative `k` and off the blocks.
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.schedule
            .locate(k)
            .map_or(Complex64::zero(), |i| self.terms[i].poly.coeff(k))
    }

    /// Value of the materialized prefix and its error certificate: the tail
    /// bound in strict mode, `+∞` in relaxed mode.
    pub fn value(&self, t: f64) -> (Complex64, f64) {
        let v = self.terms.iter().map(|term| term.poly.eval(t)).sum();
        (v, self.certificate(self.tail_bound))
    }

    fn certificate(&self, bound: f64) -> f64 {
        match self.spec.mode {
            Mode::Strict => bound,
            Mode::Relaxed => f64::INFINITY,
        }
    }

    /// Certified sup-norm bound for the terms after schedule position `pos`,
    /// including the omitted tail (`+∞` in relaxed mode).
    pub fn tail_after(&self, pos: usize) -> f64 {
        let materialized: f64 = self.terms.iter().skip(pos + 1).map(|t| t.eps).sum();
        self.certificate(materialized + self.tail_bound)
    }

    pub fn partial_sum(&self, n: u64, t: f64) -> Complex64 {
        let mut acc = Complex64::zero();
        for (e, term) in self.entries().iter().zip(&self.terms) {
            if e.block.lo > n {
                break;
            }
            acc += if e.block.hi <= n {
                term.poly.eval(t)
            } else {
                term.poly.partial_sum(n, t)
            };
        }
        acc
    }

    /// `S_n` at every `n` in `ns` (any order), evaluating each full block once.
    pub fn partial_sums_at(&self, t: f64, ns: &[u64]) -> Vec<Complex64> {
        let full: Vec<Complex64> = self.terms.iter().map(|term| term.poly.eval(t)).collect();
        let mut prefix = Vec::with_capacity(full.len() + 1);
        prefix.push(Complex64::zero());
        for v in &full {
            prefix.push(prefix.last().copied().unwrap_or_default() + v);
        }
        let entries = self.entries();
        ns.iter()
            .map(|&n| {
                let done = entries.partition_point(|e| e.block.hi <= n);
                let mut acc = prefix[done];
                if let Some(e) = entries.get(done) {
                    if e.block.lo <= n {
                        acc += self.terms[done].poly.partial_sum(n, t);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn min_frequency(&self) -> Option<i64> {
        self.terms.iter().filter_map(|t| t.poly.lo()).min()
    }

    pub fn max_frequency(&self) -> u64 {
        self.terms
            .iter()
            .filter_map(|t| t.poly.hi())
            .max()
            .map_or(0, |k| k.max(0) as u64)
    }

    /// Highest index whose partial sum involves a materialized block.
    pub fn last_block_hi(&self) -> u64 {
        self.schedule.last_hi().unwrap_or(0)
    }

    /// All terms merged into one polynomial.
    pub fn assembled(&self) -> TrigPoly {
        self.terms
            .iter()
            .fold(TrigPoly::zero(), |acc, t| acc.add(&t.poly))
    }

    /// Exact check that every term lives inside its block and above frequency 0.
    pub fn verify_spectrum(&self) -> Result<()> {
        self.schedule.validate()?;
        for (e, term) in self.entries().iter().zip(&self.terms) {
            if let (Some(lo), Some(hi)) = (term.poly.lo(), term.poly.hi()) {
                if !e.block.contains(lo) || !e.block.contains(hi) {
                    return Err(Error::invalid(format!("term {} leaves its block", e.label)));
                }
            }
        }
        Ok(())
    }

    /// Value at `t` of the components attached to point `l` in the terms of row `m`.
    pub fn row_component_value(&self, m: usize, point: usize, t: f64) -> Complex64 {
        self.terms
            .iter()
            .filter(|term| term.label.row() == m)
            .flat_map(|term| term.components.iter().filter(|c| c.point == point))
            .map(|c| c.poly.eval(t))
            .sum()
    }

    /// Value at `t` of every term in row `m` (the materialized `f_m`).
    pub fn row_value(&self, m: usize, t: f64) -> Complex64 {
        self.terms
            .iter()
            .filter(|term| term.label.row() == m)
            .map(|term| term.poly.eval(t))
            .sum()
    }

    pub fn rows(&self) -> usize {
        self.terms.iter().map(|t| t.label.row()).max().unwrap_or(0)
    }

    pub fn manifest(&self) -> Manifest {
        let terms = self
            .terms
            .iter()
            .flat_map(|term| {
                term.components.iter().map(move |c| TermRecord {
                    label: term.label,
                    l: c.point + 1,
                    c: c.target,
                    big_n: term.order.center(),
                    n: term.order.width(),
                    eps: term.eps,
                })
            })
            .collect();
        Manifest {
            spec: self.spec.clone(),
            schedule: self.schedule.clone(),
            terms,
            tail_bound: self.tail_bound,
            checkpoints: self.checkpoints.clone(),
        }
    }
}

/// Phase factor used when a caller shifts a whole series; kept for symmetry with `TrigPoly`.
pub fn point_phase(k: i64, t0: f64) -> Complex64 {
    cis(-k, t0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub label: Label,
    /// 1-based point index.
    pub l: usize,
    pub c: Complex64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub n: u64,
    pub eps: f64,
}

/// JSON description of a built series. Coefficients are not stored; loading
/// rebuilds the series from `spec` and checks it against the recorded schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: SeriesSpec,
    pub schedule: BlockSchedule,
    pub terms: Vec<TermRecord>,
    pub tail_bound: f64,
    pub checkpoints: Vec<Checkpoint>,
}

impl Manifest {
    pub fn rebuild(&self) -> Result<UniversalSeries> {
        let s = build(&self.spec)?;
        if s.schedule != self.schedule || s.manifest().terms != self.terms {
            return Err(Error::invalid("manifest does not match its own spec"));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn relaxed(kind: SeriesKind, points: Vec<f64>, truncation: usize, n: u64) -> SeriesSpec {
        SeriesSpec {
            relaxed_order: n,
            ..SeriesSpec::new(kind, points, truncation, Mode::Relaxed)
        }
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn checkpoints_hit_targets() {
        let s = build_single_point(&relaxed(SeriesKind::Single, vec![0.0], 2, 3)).unwrap();
        for cp in &s.checkpoints {
            let c = cp.expected[0].1;
            assert!(close(s.partial_sum(cp.n, 0.0), c, 1e-10), "{cp:?}");
        }
    }

    #[test]
    fn zero_target_gives_zero_series() {
        let s = build_single_point(&relaxed(SeriesKind::Single, vec![0.0], 1, 3)).unwrap();
        assert!(s.terms[0].poly.is_zero());
        assert_eq!(s.value(1.3).0, Complex64::zero());
        assert_eq!(s.coeff(3), Complex64::zero());
    }

    #[test]
    fn shift_covariance() {
        let at0 = build_single_point(&relaxed(SeriesKind::Single, vec![0.0], 2, 3)).unwrap();
        let at1 = build_single_point(&relaxed(SeriesKind::Single, vec![1.0], 2, 3)).unwrap();
        for (a, b) in at0.checkpoints.iter().zip(&at1.checkpoints) {
            assert_eq!(a.n, b.n);
            assert!(close(
                at0.partial_sum(a.n, 0.0),
                at1.partial_sum(b.n, 1.0),
                1e-10
            ));
        }
        for t in [0.2, 1.9, -2.5] {
            assert!(close(at0.value(t).0, at1.value(t + 1.0).0, 1e-10));
        }
    }

    #[test]
    fn finite_with_one_point_reduces_to_single() {
        let single = build_single_point(&relaxed(SeriesKind::Single, vec![0.4], 3, 5)).unwrap();
        let finite = build_finite(&relaxed(SeriesKind::Finite, vec![0.4], 3, 5)).unwrap();
        assert_eq!(single.terms, finite.terms);
        assert_eq!(single.schedule, finite.schedule);
    }

    #[test]
    fn duplicate_points_rejected() {
        let spec = relaxed(SeriesKind::Finite, vec![0.5, 0.5 + 2.0 * PI], 2, 3);
        assert!(build_finite(&spec).is_err());
    }

    #[test]
    fn two_point_cross_term() {
        let s = build_finite(&relaxed(SeriesKind::Finite, vec![0.0, PI], 1, 4)).unwrap();
        // Block 1 targets dense_point(1, 2) = (0, 0), so everything vanishes.
        assert!(s.terms[0].poly.is_zero());
        let s = build_finite(&relaxed(SeriesKind::Finite, vec![0.0, PI], 2, 4)).unwrap();
        let n = s.checkpoints[1].n;
        let own = s.checkpoints[1].expected[0].1;
        let term = &s.terms[1];
        let other = term.components[1].poly.partial_sum(n, 0.0);
        // Direct oracle: the first block is zero, so S_n(f,0) is own + cross.
        assert!(close(s.partial_sum(n, 0.0), own + other, 1e-12));
        let sup = term.components[1].poly.sup_norm_estimate(1 << 12).value;
        assert!(other.norm() <= sup * 1.5 + 1e-12);
    }

    #[test]
    fn zero_scaled_point_component() {
        let mut spec = relaxed(SeriesKind::Finite, vec![0.0, PI], 2, 4);
        spec.targets.scale = 0.0;
        let s = build_finite(&spec).unwrap();
        assert!(s.assembled().is_zero());
    }

    #[test]
    fn countable_single_diagonal_matches_single_point() {
        let mut spec = relaxed(SeriesKind::Countable, vec![0.3, 1.0, 2.0], 1, 5);
        spec.eps = EpsRule::geometric(1.0, 2);
        let c = build_countable(&spec).unwrap();
        assert_eq!(c.terms.len(), 1);
        let mut single = relaxed(SeriesKind::Single, vec![0.3], 1, 5);
        single.eps = EpsRule::geometric(0.5, 2);
        let s = build_single_point(&single).unwrap();
        assert_eq!(c.terms[0].poly, s.terms[0].poly);
        assert_eq!(c.terms[0].eps, s.terms[0].eps);
    }

    #[test]
    fn countable_tail_closed_form() {
        let mut spec = relaxed(SeriesKind::Countable, vec![0.0, 2.0, 4.0], 3, 3);
        spec.eps = EpsRule::geometric(1.0, 4);
        let s = build_countable(&spec).unwrap();
        let included: f64 = s.terms.iter().map(|t| t.eps).sum();
        assert!((s.tail_bound - (1.0 / 9.0 - included)).abs() < 1e-15);
        assert_eq!(s.terms.len(), 6);
    }

    #[test]
    fn countable_support_is_disjoint_union() {
        let mut spec = relaxed(SeriesKind::Countable, vec![0.0, 2.0], 2, 3);
        spec.targets.scale = 0.5;
        let s = build_countable(&spec).unwrap();
        s.verify_spectrum().unwrap();
        let blocks: Vec<_> = s.entries().iter().map(|e| e.block).collect();
        assert_eq!(blocks.len(), 3);
        for k in -5..=(s.max_frequency() as i64 + 5) {
            let owners = blocks.iter().filter(|b| b.contains(k)).count();
            assert!(owners <= 1);
            if owners == 0 {
                assert_eq!(s.coeff(k), Complex64::zero());
            }
        }
    }

    #[test]
    fn partial_sums_batch_matches_direct() {
        let mut spec = relaxed(SeriesKind::Countable, vec![0.0, 2.0, 4.0], 3, 3);
        spec.targets.scale = 0.3;
        let s = build_countable(&spec).unwrap();
        let ns: Vec<u64> = (0..=s.max_frequency() + 3).step_by(7).collect();
        let batch = s.partial_sums_at(0.77, &ns);
        for (n, v) in ns.iter().zip(batch) {
            assert!(close(v, s.partial_sum(*n, 0.77), 1e-12));
            assert!(close(v, s.assembled().partial_sum(*n, 0.77), 1e-11));
        }
    }

    #[test]
    fn strict_build_uses_certified_orders() {
        let mut spec = SeriesSpec::new(SeriesKind::Single, vec![0.0], 4, Mode::Strict);
        spec.targets.scale = 1.0 / 64.0;
        let s = build_single_point(&spec).unwrap();
        for term in &s.terms {
            let c = term.components[0].target;
            let h = crate::rational::harmonic(term.order.width());
            assert!(h >= spec.kappa * 2.0 * c.norm() / term.eps);
        }
        let (_, err) = s.value(0.3);
        assert_eq!(err, 1.0 / 16.0);
    }

    #[test]
    fn strict_order_quota() {
        let mut spec = SeriesSpec::new(SeriesKind::Single, vec![0.0], 3, Mode::Strict);
        spec.targets.scale = 4.0;
        assert!(matches!(
            build_single_point(&spec),
            Err(Error::OrderQuota { .. })
        ));
    }

    #[test]
    fn relaxed_certificate_is_infinite() {
        let s = build_single_point(&relaxed(SeriesKind::Single, vec![0.0], 2, 3)).unwrap();
        assert_eq!(s.value(0.1).1, f64::INFINITY);
    }

    #[test]
    fn manifest_round_trip() {
        let s = build_finite(&relaxed(SeriesKind::Finite, vec![0.0, 2.0], 3, 3)).unwrap();
        let text = serde_json::to_string(&s.manifest()).unwrap();
        let m: Manifest = serde_json::from_str(&text).unwrap();
        let again = m.rebuild().unwrap();
        assert_eq!(again.terms, s.terms);
    }
}
