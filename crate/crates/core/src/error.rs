use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Fejer order: need N > n >= 1, got N = {big}, n = {small}")]
    InvalidOrder { big: u64, small: u64 },

    #[error("frequency quota exceeded: block would reach {required}, cap is {cap}")]
    FrequencyQuota { required: u128, cap: i64 },

    #[error("order quota exceeded: need H_n >= {threshold:.6}, but the order cap {cap} only reaches H_n = {reachable:.6}")]
    OrderQuota {
        threshold: f64,
        cap: u64,
        reachable: f64,
    },

    #[error(
        "strict mode cannot certify the block: 4|c|/H_n = {variation:.6e} exceeds eps = {eps:.6e}"
    )]
    NotCertified { variation: f64, eps: f64 },

    #[error(
        "no checkpoint reaches the targets within delta = {delta}: best error {best_error:.6e}"
    )]
    NoHit { delta: f64, best_error: f64 },

    #[error("stage {stage} needs row m = {row}, but only {materialized} rows are materialized")]
    StageInfeasible {
        stage: usize,
        row: usize,
        materialized: usize,
    },

    #[error("ternary prefix of length {have} cannot resolve stage {need}")]
    PrefixTooShort { have: usize, need: usize },

    #[error("probe angle coincides with universality point {index}")]
    ProbeOnSet { index: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Quota and search failures, as opposed to malformed input.
    pub fn is_numeric_failure(&self) -> bool {
        matches!(
            self,
            Error::FrequencyQuota { .. }
                | Error::OrderQuota { .. }
                | Error::NotCertified { .. }
                | Error::NoHit { .. }
                | Error::StageInfeasible { .. }
                | Error::PrefixTooShort { .. }
                | Error::ProbeOnSet { .. }
        )
    }
}
