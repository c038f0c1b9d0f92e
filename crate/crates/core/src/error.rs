use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid symbol {0:?}: words are over the alphabet {{0, 1}}")]
    InvalidSymbol(char),

    #[error("empty word where a nonempty word is required")]
    EmptyWord,

    #[error("unknown word source {0:?} (expected fibonacci, fibonacci-c, thue-morse, periodic:<x> or literal:<w>)")]
    UnknownSource(String),

    #[error("factor length {k} out of range for a prefix of length {len}")]
    FactorLength { k: usize, len: usize },

    #[error("overlap {ell} out of range for order {k} (need 1 <= ell <= k-1)")]
    OverlapRange { k: usize, ell: usize },

    #[error("order {k} out of range: {reason}")]
    OrderRange { k: usize, reason: &'static str },

    #[error("prefix of length {have} is too short, {need} symbols are needed")]
    InsufficientPrefix { have: usize, need: usize },

    #[error("vertex index {j} out of range 1..={max}")]
    VertexIndex { j: usize, max: usize },

    #[error("half-range variant {variant} does not apply to order {k}")]
    VariantParity { variant: &'static str, k: usize },

    #[error("closed-form arc map does not apply to k={k}, ell={ell}: {reason}")]
    ClosedFormPrecondition { k: usize, ell: usize, reason: String },

    #[error("no reachability witness for v_{j} (k={k}, ell={ell}) with t <= {search_bound}")]
    WitnessNotFound { k: usize, ell: usize, j: usize, search_bound: usize },

    #[error("{what} exceeds the limit of {limit}")]
    SizeLimit { what: &'static str, limit: usize },

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("arithmetic overflow evaluating {0}")]
    Overflow(&'static str),
}
