//! Covers of the divergence set, the decay profile that controls convergence
//! off the universality set, oscillation scans, and Rogosinski residuals.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::EpsRule;
use crate::builder::UniversalSeries;
use crate::error::{Error, Result};
use crate::phase::wrap_angle;
use crate::trigpoly::{fmt_real, TrigPoly};

/// Radii `δ_m` of the cover intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum DeltaRule {
    /// `δ_m = e^{−rate·m}`.
    Exponential { rate: f64 },
    /// Explicit `δ_1, δ_2, …`.
    Table { values: Vec<f64> },
}

impl DeltaRule {
    /// `δ_m` (1-based); `None` past the end of a table.
    pub fn delta(&self, m: usize) -> Option<f64> {
        match self {
            DeltaRule::Exponential { rate } => Some((-rate * m as f64).exp()),
            DeltaRule::Table { values } => values.get(m.checked_sub(1)?).copied(),
        }
    }

    /// Checks positivity and strict decrease of `δ_1..δ_depth`.
    pub fn validate(&self, depth: usize) -> Result<()> {
        if let DeltaRule::Exponential { rate } = self {
            if !(rate.is_finite() && *rate > 0.0) {
                return Err(Error::invalid(
                    "exponential delta rule needs a positive rate",
                ));
            }
        }
        let mut prev = f64::INFINITY;
        for m in 1..=depth {
            let d = self
                .delta(m)
                .ok_or_else(|| Error::invalid(format!("delta table has no entry for m = {m}")))?;
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::invalid(format!("delta_{m} must be positive")));
            }
            if d >= prev {
                return Err(Error::invalid(format!(
                    "delta rule must be strictly decreasing (m = {m})"
                )));
            }
            prev = d;
        }
        Ok(())
    }

    /// `Σ_{m ≥ m0} (2δ_m)^a` in closed form, when the rule has one.
    pub fn premeasure_tail(&self, a: f64, m0: usize) -> Option<f64> {
        match *self {
            DeltaRule::Exponential { rate } => {
                let q = (-rate * a).exp();
                Some(2f64.powf(a) * (-rate * a * m0 as f64).exp() / (1.0 - q))
            }
            DeltaRule::Table { .. } => None,
        }
    }
}

/// Intervals `I_m = (t_m − δ_m, t_m + δ_m)` on the circle, `m = 1..depth`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceCover {
    pub rule: DeltaRule,
    pub points: Vec<f64>,
    pub depth: usize,
    /// `(center, radius)` for `m = 1..depth`.
    pub intervals: Vec<(f64, f64)>,
}

pub fn build_cover(rule: DeltaRule, points: &[f64], depth: usize) -> Result<DivergenceCover> {
    if depth == 0 {
        return Err(Error::invalid("cover depth must be at least 1"));
    }
    if points.len() < depth {
        return Err(Error::invalid(format!(
            "cover of depth {depth} needs {depth} points, got {}",
            points.len()
        )));
    }
    rule.validate(depth)?;
    let intervals = (1..=depth)
        .map(|m| (points[m - 1], rule.delta(m).unwrap_or_default()))
        .collect();
    Ok(DivergenceCover {
        rule,
        points: points[..depth].to_vec(),
        depth,
        intervals,
    })
}

impl DivergenceCover {
    /// Whether `t ∈ I_m` (1-based), measured on the circle.
    pub fn contains(&self, m: usize, t: f64) -> bool {
        m >= 1
            && self
                .intervals
                .get(m - 1)
                .is_some_and(|&(c, r)| wrap_angle(t - c).abs() < r)
    }

    /// First `m ≥ m0` with `t ∈ I_m`, up to the materialized depth.
    pub fn covering_index(&self, t: f64, m0: usize) -> Option<usize> {
        (m0.max(1)..=self.depth).find(|&m| self.contains(m, t))
    }

    pub fn radii(&self) -> Vec<f64> {
        self.intervals.iter().map(|&(_, r)| r).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Premeasure {
    /// `Σ_{m=m0}^{M} (2δ_m)^a`.
    pub finite: f64,
    /// `Σ_{m ≥ m0} (2δ_m)^a` for rules with a closed form.
    pub tail: Option<f64>,
}

pub fn premeasure(cover: &DivergenceCover, a: f64, m0: usize, upto: usize) -> Result<Premeasure> {
    if !(a > 0.0) {
        return Err(Error::invalid("premeasure exponent must be positive"));
    }
    if m0 == 0 || m0 > upto || upto > cover.depth {
        return Err(Error::invalid(format!(
            "need 1 <= m0 <= M <= {}",
            cover.depth
        )));
    }
    let finite = cover.intervals[m0 - 1..upto]
        .iter()
        .map(|&(_, r)| (2.0 * r).powf(a))
        .sum();
    Ok(Premeasure {
        finite,
        tail: cover.rule.premeasure_tail(a, m0),
    })
}

/// What the `1/δ_l` factor of the profile is measured against.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileSource<'a> {
    /// `Σ_{l ≤ m} 1/δ_l`.
    Cover(&'a DeltaRule),
    /// `Σ_{l ≤ min(m, |points|)} 1/|t − t_l|` for a fixed probe angle `t`.
    Probe { t: f64, points: &'a [f64] },
}

/// `r_m = (max_j ε_{m,j})·Σ_l 1/δ_l` (or `1/|t − t_l|`), `m = 1..depth`.
pub fn condition15_profile(
    eps: &EpsRule,
    source: &ProfileSource<'_>,
    depth: usize,
) -> Result<Vec<f64>> {
    eps.validate(true)?;
    let mut inverse_sum = 0.0;
    let mut out = Vec::with_capacity(depth);
    for m in 1..=depth {
        match source {
            ProfileSource::Cover(rule) => {
                let d = rule.delta(m).filter(|d| *d > 0.0).ok_or_else(|| {
                    Error::invalid(format!("delta_{m} is missing or not positive"))
                })?;
                inverse_sum += 1.0 / d;
            }
            ProfileSource::Probe { t, points } => {
                if let Some(&tl) = points.get(m - 1) {
                    let dist = wrap_angle(t - tl).abs();
                    if dist <= 1e-12 {
                        return Err(Error::ProbeOnSet { index: m });
                    }
                    inverse_sum += 1.0 / dist;
                }
            }
        }
        out.push(eps.row_max(m) * inverse_sum);
    }
    Ok(out)
}

/// Anything with Fourier partial sums.
pub trait PartialSums {
    /// `S_n(t)` for every `n` in `ns` (any order).
    fn partial_sums(&self, t: f64, ns: &[u64]) -> Vec<Complex64>;
    /// Index beyond which partial sums no longer change.
    fn max_index(&self) -> u64;
    /// Indices that carry structure (checkpoints and gap indices).
    fn landmarks(&self) -> Vec<u64>;
}

impl PartialSums for TrigPoly {
    fn partial_sums(&self, t: f64, ns: &[u64]) -> Vec<Complex64> {
        let mut order: Vec<usize> = (0..ns.len()).collect();
        order.sort_by_key(|&i| ns[i]);
        let sorted: Vec<u64> = order.iter().map(|&i| ns[i]).collect();
        let values = self.partial_sums_at(t, &sorted);
        let mut out = vec![Complex64::default(); ns.len()];
        for (v, &i) in values.into_iter().zip(&order) {
            out[i] = v;
        }
        out
    }

    fn max_index(&self) -> u64 {
        self.degree()
    }

    fn landmarks(&self) -> Vec<u64> {
        vec![self.degree()]
    }
}

impl PartialSums for UniversalSeries {
    fn partial_sums(&self, t: f64, ns: &[u64]) -> Vec<Complex64> {
        self.partial_sums_at(t, ns)
    }

    fn max_index(&self) -> u64 {
        self.max_frequency()
    }

    fn landmarks(&self) -> Vec<u64> {
        self.entries()
            .iter()
            .flat_map(|e| [e.block.lo.saturating_sub(1), e.checkpoint(), e.block.hi])
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Oscillation below this is tagged "settled".
    pub tol: f64,
    /// Extra uniformly random indices per angle.
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            tol: 1e-6,
            random_samples: 64,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationRow {
    pub t: f64,
    pub osc_re: f64,
    pub osc_im: f64,
    /// Larger of the two ranges.
    pub osc: f64,
    /// `S_n(t)` at the largest sampled index.
    pub last: Complex64,
    pub settled: bool,
}

impl OscillationRow {
    pub fn tag(&self) -> &'static str {
        if self.settled {
            "settled"
        } else {
            "oscillating"
        }
    }
}

/// The sampled indices: `n_min`, the landmarks in `[n_min, max]`, `max`, and
/// `random_samples` seeded draws from `[n_min, max]`.
pub fn scan_indices(p: &impl PartialSums, n_min: u64, opts: &ScanOptions) -> Vec<u64> {
    let max = p.max_index().max(n_min);
    let mut ns: Vec<u64> = p
        .landmarks()
        .into_iter()
        .filter(|&n| n >= n_min && n <= max)
        .collect();
    ns.push(n_min);
    ns.push(max);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    ns.extend((0..opts.random_samples).map(|_| rng.gen_range(n_min..=max)));
    ns.sort_unstable();
    ns.dedup();
    ns
}

/// Range of `Re S_n(t)` and `Im S_n(t)` over the sampled `n ≥ n_min`.
pub fn oscillation_scan(
    p: &impl PartialSums,
    t_grid: &[f64],
    n_min: u64,
    opts: &ScanOptions,
) -> Vec<OscillationRow> {
    let ns = scan_indices(p, n_min, opts);
    t_grid
        .iter()
        .map(|&t| {
            let values = p.partial_sums(t, &ns);
            let range = |f: fn(&Complex64) -> f64| {
                let (lo, hi) = values
                    .iter()
                    .map(f)
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                        (lo.min(x), hi.max(x))
                    });
                hi - lo
            };
            let osc_re = range(|z| z.re);
            let osc_im = range(|z| z.im);
            let osc = osc_re.max(osc_im);
            OscillationRow {
                t,
                osc_re,
                osc_im,
                osc,
                last: values.last().copied().unwrap_or_default(),
                settled: osc < opts.tol,
            }
        })
        .collect()
}

pub fn write_oscillation_csv(rows: &[OscillationRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "t,osc_re,osc_im,last_re,last_im,tag")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_real(r.t),
            fmt_real(r.osc_re),
            fmt_real(r.osc_im),
            fmt_real(r.last.re),
            fmt_real(r.last.im),
            r.tag()
        )?;
    }
    Ok(())
}

/// Pairs `(n_j, θ_j)` with `a ≤ n_j·θ_j ≤ b`, probing near `t0` against a
/// claimed Cesàro limit `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RogosinskiProbe {
    pub t0: f64,
    pub s: Complex64,
    pub pairs: Vec<(u64, f64)>,
    pub window: (f64, f64),
}

impl RogosinskiProbe {
    /// `θ_j = φ/n_j` for a fixed `φ ∈ [a, b]`.
    pub fn with_phase(
        t0: f64,
        s: Complex64,
        phi: f64,
        ns: &[u64],
        window: (f64, f64),
    ) -> Result<Self> {
        let probe = RogosinskiProbe {
            t0,
            s,
            pairs: ns.iter().map(|&n| (n, phi / n as f64)).collect(),
            window,
        };
        probe.validate()?;
        Ok(probe)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.window;
        if !(0.0 < a && a < b && b < std::f64::consts::TAU) {
            return Err(Error::invalid("window must satisfy 0 < a < b < 2π"));
        }
        let mut prev = None;
        for &(n, theta) in &self.pairs {
            if n == 0 || prev.is_some_and(|p| n <= p) {
                return Err(Error::invalid(
                    "probe indices must be positive and strictly increasing",
                ));
            }
            // Tolerate the rounding of φ/n·n.
            let x = n as f64 * theta;
            let slack = 4.0 * f64::EPSILON * b;
            if !(x >= a - slack && x <= b + slack) {
                return Err(Error::invalid(format!(
                    "n·θ = {x} leaves the window [{a}, {b}]"
                )));
            }
            prev = Some(n);
        }
        Ok(())
    }
}

/// `S_n(t0+θ) − (S_n(t0) − s)e^{inθ} − s` per pair, or with `symmetric` the
/// average of `S_n(t0 ± θ)` against `(S_n(t0) − s)·cos(nθ)`.
pub fn rogosinski_residual(
    p: &impl PartialSums,
    probe: &RogosinskiProbe,
    symmetric: bool,
) -> Result<Vec<Complex64>> {
    probe.validate()?;
    let ns: Vec<u64> = probe.pairs.iter().map(|&(n, _)| n).collect();
    let at_t0 = p.partial_sums(probe.t0, &ns);
    Ok(probe
        .pairs
        .iter()
        .zip(at_t0)
        .map(|(&(n, theta), center)| {
            let plus = p.partial_sums(probe.t0 + theta, &[n])[0];
            let phase = n as f64 * theta;
            if symmetric {
                let minus = p.partial_sums(probe.t0 - theta, &[n])[0];
                0.5 * (plus + minus) - (center - probe.s) * phase.cos() - probe.s
            } else {
                plus - (center - probe.s) * Complex64::from_polar(1.0, phase) - probe.s
            }
        })
        .collect())
}
