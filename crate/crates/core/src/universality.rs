//! Searches for partial-sum indices that hit prescribed values at the
//! universality points.
//!
//! Candidates are the checkpoints `n = 3N` of the materialized blocks. They are
//! ranked by a proxy, the distance between the block's own dense value and the
//! residual target after removing cross terms. The first candidate in proxy order
//! whose directly evaluated error is below `delta` wins. Reported errors always
//! come from evaluating `S_n` of the whole materialized series.

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::builder::{SeriesKind, UniversalSeries};
use crate::error::{Error, Result};
use crate::schedule::Label;

/// Prescribed values `h(t_l)`, keyed by 0-based point index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetFunction {
    pub entries: Vec<TargetEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetEntry {
    /// 0-based index into the series' point list.
    pub l: usize,
    pub value: Complex64,
}

impl TargetFunction {
    /// Targets `values[l]` at points `0..values.len()`.
    pub fn from_values(values: &[Complex64]) -> Self {
        TargetFunction {
            entries: values
                .iter()
                .enumerate()
                .map(|(l, &value)| TargetEntry { l, value })
                .collect(),
        }
    }

    pub fn get(&self, l: usize) -> Option<Complex64> {
        self.entries.iter().find(|e| e.l == l).map(|e| e.value)
    }

    fn validate(&self, points: usize) -> Result<()> {
        for (i, e) in self.entries.iter().enumerate() {
            if e.l >= points {
                return Err(Error::invalid(format!(
                    "target point {} is not a point of the series",
                    e.l + 1
                )));
            }
            if self.entries[..i].iter().any(|o| o.l == e.l) {
                return Err(Error::invalid(format!(
                    "target point {} is given twice",
                    e.l + 1
                )));
            }
            if !(e.value.re.is_finite() && e.value.im.is_finite()) {
                return Err(Error::invalid("target values must be finite"));
            }
        }
        Ok(())
    }

    /// Target values for points `0..count`, failing if one is missing.
    fn require(&self, count: usize) -> Result<Vec<Complex64>> {
        (0..count)
            .map(|l| {
                self.get(l)
                    .ok_or_else(|| Error::invalid(format!("no target given for point {}", l + 1)))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointHit {
    /// 0-based point index.
    pub l: usize,
    pub t: f64,
    pub target: Complex64,
    pub achieved: Complex64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageInfo {
    pub stage: usize,
    pub row: usize,
    pub delta: f64,
    /// Closed-form `Σ_{m > row} ε_m`.
    pub rows_tail: f64,
    /// Whether `Σ_{m > row} ε_m < δ/3` was confirmed in exact rational arithmetic.
    pub tail_exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HitReport {
    pub n: u64,
    pub label: Label,
    pub points: Vec<PointHit>,
    pub max_error: f64,
    /// Search-side estimate of the error that ranked this candidate.
    pub proxy: f64,
    pub stage: Option<StageInfo>,
}

struct Candidate {
    pos: usize,
    proxy: f64,
    col: usize,
}

/// Rank the blocks of `row` above `n_floor` against `residual`, then accept the
/// first candidate whose direct error against `targets` is below `delta`.
fn search_row(
    s: &UniversalSeries,
    row: usize,
    residual: &[Complex64],
    targets: &[Complex64],
    delta: f64,
    n_floor: Option<u64>,
) -> Result<HitReport> {
    let dim = targets.len();
    let points = &s.spec.points;
    // Cross terms: the other points' components of this row, evaluated at t_l.
    let cross: Vec<Complex64> = (0..dim)
        .map(|l| {
            (0..dim)
                .filter(|&o| o != l)
                .map(|o| s.row_component_value(row, o, points[l]))
                .sum()
        })
        .collect();

    let mut candidates: Vec<Candidate> = s
        .terms
        .iter()
        .enumerate()
        .filter(|(pos, term)| {
            term.label.row() == row && n_floor.is_none_or(|f| s.entries()[*pos].checkpoint() > f)
        })
        .map(|(pos, term)| {
            let proxy = term
                .components
                .iter()
                .map(|c| (c.target - (residual[c.point] - cross[c.point])).norm())
                .fold(0.0, f64::max);
            Candidate {
                pos,
                proxy,
                col: term.label.col(),
            }
        })
        .collect();
    // Equal proxies resolve to the smallest j.
    candidates.sort_by(|a, b| a.proxy.total_cmp(&b.proxy).then(a.col.cmp(&b.col)));

    let ns: Vec<u64> = candidates
        .iter()
        .map(|c| s.entries()[c.pos].checkpoint())
        .collect();
    let achieved: Vec<Vec<Complex64>> = (0..dim)
        .map(|l| s.partial_sums_at(points[l], &ns))
        .collect();

    let mut best = f64::INFINITY;
    for (i, cand) in candidates.iter().enumerate() {
        let hits: Vec<PointHit> = (0..dim)
            .map(|l| PointHit {
                l,
                t: points[l],
                target: targets[l],
                achieved: achieved[l][i],
                error: (achieved[l][i] - targets[l]).norm(),
            })
            .collect();
        let max_error = hits.iter().map(|h| h.error).fold(0.0, f64::max);
        best = best.min(max_error);
        if max_error < delta {
            let entry = &s.entries()[cand.pos];
            return Ok(HitReport {
                n: entry.checkpoint(),
                label: entry.label,
                points: hits,
                max_error,
                proxy: cand.proxy,
                stage: None,
            });
        }
    }
    Err(Error::NoHit {
        delta,
        best_error: best,
    })
}

/// Find a checkpoint `n` with `max_l |S_n(f, t_l) − h(t_l)| < delta` for a
/// single-point or finite build.
pub fn usearch_finite(
    s: &UniversalSeries,
    targets: &TargetFunction,
    delta: f64,
) -> Result<HitReport> {
    if s.spec.kind == SeriesKind::Countable {
        return Err(Error::invalid(
            "usearch_finite needs a single-point or finite build",
        ));
    }
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    let dim = s.spec.points.len();
    targets.validate(dim)?;
    let h = targets.require(dim)?;
    search_row(s, 1, &h, &h, delta, None)
}

/// Smallest row `m ≥ floor` with `Σ_{m' > m} ε_{m'} < delta/3`, and whether the
/// inequality was confirmed exactly.
pub fn stage_row(s: &UniversalSeries, delta_exact: &BigRational, floor: usize) -> (usize, bool) {
    let delta = crate::rational::to_f64(delta_exact);
    let third = delta_exact / BigRational::from_integer(3.into());
    let mut m = floor.max(1);
    loop {
        match s.spec.eps.rows_tail_exact(m) {
            Some(tail) if tail < third => return (m, true),
            Some(_) => {}
            None if s.spec.eps.rows_tail(m) < delta / 3.0 => return (m, false),
            None => {}
        }
        m += 1;
    }
}

/// Staged search on a countable build with `δ_N = 1/N`.
///
/// Stage `N` picks the row `m_N` (strictly increasing in `N`), removes the
/// materialized rows `m < m_N` from the targets, and searches the blocks of
/// row `m_N` whose checkpoints lie beyond the previous stage's index.
pub fn usearch_staged(
    s: &UniversalSeries,
    h: &TargetFunction,
    stages: usize,
) -> Result<Vec<HitReport>> {
    if s.spec.kind != SeriesKind::Countable {
        return Err(Error::invalid("usearch_staged needs a countable build"));
    }
    h.validate(s.spec.points.len())?;
    let mut reports: Vec<HitReport> = Vec::with_capacity(stages);
    let mut prev_row = 0;
    for stage in 1..=stages {
        let delta_exact = BigRational::new(1.into(), (stage as i64).into());
        let delta = 1.0 / stage as f64;
        let (row, tail_exact) = stage_row(s, &delta_exact, prev_row + 1);
        if row > s.rows() {
            return Err(Error::StageInfeasible {
                stage,
                row,
                materialized: s.rows(),
            });
        }
        let dim = row.min(s.spec.points.len());
        let targets = h.require(dim)?;
        let residual: Vec<Complex64> = (0..dim)
            .map(|l| {
                targets[l]
                    - (1..row)
                        .map(|m| s.row_value(m, s.spec.points[l]))
                        .sum::<Complex64>()
            })
            .collect();
        let floor = reports.last().map(|r| r.n);
        let mut report = search_row(s, row, &residual, &targets, delta, floor)?;
        report.stage = Some(StageInfo {
            stage,
            row,
            delta,
            rows_tail: s.spec.eps.rows_tail(row),
            tail_exact,
        });
        reports.push(report);
        prev_row = row;
    }
    Ok(reports)
}
