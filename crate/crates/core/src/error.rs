use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence index must be at least 1")]
    ZeroIndex,

    #[error("prefix exhausted: index {needed} requested but only {available} values are available")]
    PrefixExhausted { needed: usize, available: usize },

    #[error("value at index {index} is not memoized; extend the sequence first")]
    NotMemoized { index: usize },

    #[error("sequence must be positive and strictly increasing (violated at index {index})")]
    NotStrictlyIncreasing { index: usize },

    #[error("{path}:{line}: cannot parse {text:?} as a rational")]
    ParseValue { path: PathBuf, line: usize, text: String },

    #[error("unknown alpha spec {0:?} (expected linear | factorial | superproduct | poly:<d> | file:<path>)")]
    UnknownAlphaSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("diameter index {index} is not certified ({})", certified_text(*.horizon))]
    Uncertified { index: usize, horizon: Option<usize> },

    #[error("ratio prefix of length {prefix} certifies no diameter")]
    NothingCertified { prefix: usize },

    #[error("closed-form segments leave diameter index {index} uncovered")]
    CoverageGap { index: usize },

    #[error("closed-form segments {first} and {second} both claim diameter index {index}")]
    CoverageOverlap { index: usize, first: String, second: String },

    #[error("closed-form self-check failed: {0}")]
    SelfCheck(String),

    #[error("search cap {cap} exhausted without a witness")]
    SearchCapExhausted { cap: u64 },

    #[error("operation requires an unstable exponent sequence; {0} is declared stable")]
    StableSequence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn certified_text(horizon: Option<usize>) -> String {
    match horizon {
        Some(h) => format!("certified through index {h}"),
        None => "nothing certified".into(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
