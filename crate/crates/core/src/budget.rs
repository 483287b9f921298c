//! Error budgets `ε_j` and `ε_{m,j}` with closed-form tails.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum EpsRule {
    /// `ε_j = scale·base^{−j}`, `ε_{m,j} = scale·base^{−(m+j)}`.
    Geometric { scale: f64, base: u32 },
    /// `ε_{m,j} = scale·4^{−(m+j)}·e^{−m²}` (finite case: `m = 1`).
    Damped { scale: f64 },
}

impl Default for EpsRule {
    fn default() -> Self {
        EpsRule::Geometric {
            scale: 1.0,
            base: 2,
        }
    }
}

impl EpsRule {
    pub fn geometric(scale: f64, base: u32) -> Self {
        EpsRule::Geometric { scale, base }
    }

    pub fn validate(&self, allow_zero: bool) -> Result<()> {
        let scale = match *self {
            EpsRule::Geometric { scale, base } => {
                if base < 2 {
                    return Err(Error::invalid("geometric budget base must be at least 2"));
                }
                scale
            }
            EpsRule::Damped { scale } => scale,
        };
        let ok = scale.is_finite() && (scale > 0.0 || (allow_zero && scale == 0.0));
        if !ok {
            return Err(Error::invalid("budget scale must be positive and finite"));
        }
        Ok(())
    }

    fn ratio(&self) -> f64 {
        match *self {
            EpsRule::Geometric { base, .. } => 1.0 / base as f64,
            EpsRule::Damped { .. } => 0.25,
        }
    }

    fn scale(&self) -> f64 {
        match *self {
            EpsRule::Geometric { scale, .. } | EpsRule::Damped { scale } => scale,
        }
    }

    /// `e^{−m²}` factor of the damped rule, 1 otherwise.
    fn row_damping(&self, m: usize) -> f64 {
        match self {
            EpsRule::Geometric { .. } => 1.0,
            EpsRule::Damped { .. } => (-((m * m) as f64)).exp(),
        }
    }

    /// Finite-case budget `ε_j`.
    pub fn single(&self, j: usize) -> f64 {
        self.scale() * self.ratio().powi(j as i32) * self.row_damping(1)
    }

    /// Countable-case budget `ε_{m,j}`.
    pub fn pair(&self, m: usize, j: usize) -> f64 {
        self.scale() * self.ratio().powi((m + j) as i32) * self.row_damping(m)
    }

    /// `Σ_{j > J} ε_j`.
    pub fn finite_tail(&self, truncation: usize) -> f64 {
        let x = self.ratio();
        self.single(truncation + 1) / (1.0 - x)
    }

    /// `ε_m = Σ_j ε_{m,j}`.
    pub fn row_total(&self, m: usize) -> f64 {
        let x = self.ratio();
        self.pair(m, 1) / (1.0 - x)
    }

    /// `max_j ε_{m,j} = ε_{m,1}`.
    pub fn row_max(&self, m: usize) -> f64 {
        self.pair(m, 1)
    }

    /// `Σ_{m' > m} ε_{m'}`.
    pub fn rows_tail(&self, m: usize) -> f64 {
        match self {
            EpsRule::Geometric { .. } => {
                let x = self.ratio();
                self.row_total(m + 1) / (1.0 - x)
            }
            // e^{−m²} decays so fast that 64 further rows exhaust double precision.
            EpsRule::Damped { .. } => (m + 1..m + 65).map(|r| self.row_total(r)).sum(),
        }
    }

    /// Exact `Σ_{m' > m} ε_{m'}` for geometric rules (`None` for the damped rule).
    pub fn rows_tail_exact(&self, m: usize) -> Option<Rational> {
        match *self {
            EpsRule::Geometric { scale, base } => {
                let b = BigInt::from(base);
                let bm = num_traits::pow(b.clone(), m);
                let denom = &bm * (&b - BigInt::one()) * (&b - BigInt::one());
                Some(rational::from_f64(scale) / Rational::from_integer(denom))
            }
            EpsRule::Damped { .. } => None,
        }
    }

    /// `Σ_{m,j} ε_{m,j}` over every pair outside the first `diagonals` diagonals.
    pub fn diagonal_tail(&self, diagonals: usize) -> f64 {
        match self {
            EpsRule::Geometric { .. } => {
                // Diagonal d holds d pairs with m + j = d + 1:
                // Σ_{d ≥ K} d·x^{d+1} = x·x^K·(K − (K−1)x)/(1−x)², K = D + 1.
                let x = self.ratio();
                let k = (diagonals + 1) as f64;
                self.scale() * x * x.powi(diagonals as i32 + 1) * (k - (k - 1.0) * x)
                    / ((1.0 - x) * (1.0 - x))
            }
            EpsRule::Damped { .. } => {
                // Rows past the included diagonals, then the omitted part of each included row.
                let mut tail = self.rows_tail(diagonals);
                for m in 1..=diagonals {
                    let included = diagonals + 1 - m;
                    tail += self.pair(m, included + 1) / (1.0 - self.ratio());
                }
                tail
            }
        }
    }

    /// `Σ_{m,j} ε_{m,j}`.
    pub fn total(&self) -> f64 {
        self.rows_tail(0)
    }

    pub fn is_zero(&self) -> bool {
        self.scale().is_zero()
    }
}
