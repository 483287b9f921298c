//! Spectral block scheduling.
//!
//! A block for order `(N, n)` is `{N − n, …, 3N + n}`, the spectrum of
//! `e^{2iNt}·P_{N,n}(t)`. Consecutive blocks must satisfy
//! `3N_j + n_j < N_{j+1} − n_{j+1}`; blocks are chained with the smallest
//! admissible `N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fejer::FejerOrder;

/// Default frequency cap, `2^31 − 1`.
pub const FREQ_CAP_DEFAULT: i64 = i32::MAX as i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub lo: u64,
    pub hi: u64,
}

impl Block {
    pub fn of(order: FejerOrder) -> Block {
        Block {
            lo: order.center() - order.width(),
            hi: 3 * order.center() + order.width(),
        }
    }

    pub fn contains(&self, k: i64) -> bool {
        k >= 0 && (self.lo..=self.hi).contains(&(k as u64))
    }
}

/// Either a plain block index `j` or a diagonal pair `(m, j)`; both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Pair { m: usize, j: usize },
    Index { j: usize },
}

impl Label {
    pub fn row(&self) -> usize {
        match *self {
            Label::Pair { m, .. } => m,
            Label::Index { .. } => 1,
        }
    }

    pub fn col(&self) -> usize {
        match *self {
            Label::Pair { j, .. } | Label::Index { j } => j,
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Pair { m, j } => write!(f, "({m},{j})"),
            Label::Index { j } => write!(f, "{j}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub label: Label,
    pub order: FejerOrder,
    /// Modulation frequency `2N`.
    pub shift: i64,
    pub block: Block,
}

impl ScheduleEntry {
    fn new(label: Label, order: FejerOrder) -> Self {
        ScheduleEntry {
            label,
            order,
            shift: 2 * order.center() as i64,
            block: Block::of(order),
        }
    }

    /// Checkpoint index `3N`.
    pub fn checkpoint(&self) -> u64 {
        3 * self.order.center()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockSchedule {
    entries: Vec<ScheduleEntry>,
}

/// Smallest `N` with `N − n > prev_hi + margin` and `N > n`, and its block.
/// `prev_hi = None` means no predecessor (treated as `−1`).
pub fn next_block(prev_hi: Option<u64>, width: u64, margin: u64, cap: i64) -> Result<(u64, Block)> {
    if width == 0 {
        return Err(Error::invalid("block order n must be at least 1"));
    }
    let first_lo = match prev_hi {
        Some(h) => h as u128 + margin as u128 + 1,
        None => margin as u128,
    };
    let center = (first_lo + width as u128).max(width as u128 + 1);
    let hi = 3 * center + width as u128;
    if hi > cap.max(0) as u128 {
        return Err(Error::FrequencyQuota { required: hi, cap });
    }
    let order = FejerOrder::new(center as u64, width)?;
    Ok((center as u64, Block::of(order)))
}

impl BlockSchedule {
    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last_hi(&self) -> Option<u64> {
        self.entries.last().map(|e| e.block.hi)
    }

    /// Append the minimal block of order `width` after the current last block.
    pub fn push(
        &mut self,
        label: Label,
        width: u64,
        margin: u64,
        cap: i64,
    ) -> Result<&ScheduleEntry> {
        let (center, _) = next_block(self.last_hi(), width, margin, cap)?;
        let order = FejerOrder::new(center, width)?;
        self.entries.push(ScheduleEntry::new(label, order));
        Ok(self.entries.last().expect("just pushed"))
    }

    /// Index of the entry whose block contains `k`.
    pub fn locate(&self, k: i64) -> Option<usize> {
        if k < 0 {
            return None;
        }
        let k = k as u64;
        let i = self.entries.partition_point(|e| e.block.hi < k);
        (i < self.entries.len() && self.entries[i].block.lo <= k).then_some(i)
    }

    pub fn position(&self, label: Label) -> Option<usize> {
        self.entries.iter().position(|e| e.label == label)
    }

    /// Check ordering, block shape and positivity.
    pub fn validate(&self) -> Result<()> {
        for e in &self.entries {
            if e.block != Block::of(e.order) || e.shift != 2 * e.order.center() as i64 {
                return Err(Error::invalid(format!(
                    "entry {} has an inconsistent block",
                    e.label
                )));
            }
            if e.block.lo < 1 {
                return Err(Error::invalid(format!(
                    "entry {} reaches frequency 0",
                    e.label
                )));
            }
        }
        for w in self.entries.windows(2) {
            let (a, b) = (&w[0].order, &w[1].order);
            if 3 * a.center() + a.width() >= b.center() - b.width() {
                return Err(Error::invalid(format!(
                    "blocks {} and {} are not separated",
                    w[0].label, w[1].label
                )));
            }
        }
        Ok(())
    }
}

/// Chain minimal blocks for orders `n_1, n_2, …`.
pub fn schedule_finite(widths: &[u64], margin: u64, cap: i64) -> Result<BlockSchedule> {
    if widths.is_empty() {
        return Err(Error::invalid("at least one block order is required"));
    }
    let mut s = BlockSchedule::default();
    for (i, &w) in widths.iter().enumerate() {
        s.push(Label::Index { j: i + 1 }, w, margin, cap)?;
    }
    Ok(s)
}

/// Labels of the first `diagonals` diagonals: `(d,1), (d−1,2), …, (1,d)` for `d = 1, 2, …`.
pub fn diagonal_labels(diagonals: usize) -> impl Iterator<Item = Label> {
    (1..=diagonals).flat_map(|d| (1..=d).map(move |j| Label::Pair { m: d + 1 - j, j }))
}

/// Chain minimal blocks in diagonal order; `order_for(m, j)` gives `n_{m,j}`.
pub fn schedule_diagonal(
    mut order_for: impl FnMut(usize, usize) -> Result<u64>,
    diagonals: usize,
    margin: u64,
    cap: i64,
) -> Result<BlockSchedule> {
    if diagonals == 0 {
        return Err(Error::invalid("at least one diagonal is required"));
    }
    let mut s = BlockSchedule::default();
    for label in diagonal_labels(diagonals) {
        let w = order_for(label.row(), label.col())?;
        s.push(label, w, margin, cap)?;
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleRecord {
    pub m: Option<usize>,
    pub j: usize,
    #[serde(rename = "N")]
    pub center: u64,
    pub n: u64,
    pub lo: u64,
    pub hi: u64,
}

impl BlockSchedule {
    pub fn records(&self) -> Vec<ScheduleRecord> {
        self.entries
            .iter()
            .map(|e| ScheduleRecord {
                m: match e.label {
                    Label::Pair { m, .. } => Some(m),
                    Label::Index { .. } => None,
                },
                j: e.label.col(),
                center: e.order.center(),
                n: e.order.width(),
                lo: e.block.lo,
                hi: e.block.hi,
            })
            .collect()
    }
}

impl Serialize for BlockSchedule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.records().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockSchedule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let records = Vec::<ScheduleRecord>::deserialize(d)?;
        let mut entries = Vec::with_capacity(records.len());
        for r in records {
            let order = FejerOrder::new(r.center, r.n).map_err(D::Error::custom)?;
            let label = match r.m {
                Some(m) => Label::Pair { m, j: r.j },
                None => Label::Index { j: r.j },
            };
            let e = ScheduleEntry::new(label, order);
            if e.block.lo != r.lo || e.block.hi != r.hi {
                return Err(D::Error::custom(format!(
                    "block bounds disagree with order at {label}"
                )));
            }
            entries.push(e);
        }
        let s = BlockSchedule { entries };
        s.validate().map_err(D::Error::custom)?;
        Ok(s)
    }
}
