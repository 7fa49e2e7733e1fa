use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("enumeration of length {n} refused: cap is {cap} ({detail})")]
    EnumerationCap {
        n: usize,
        cap: usize,
        detail: &'static str,
    },

    #[error("{what} budget exceeded: requested {requested}, limit {limit}; {hint}")]
    Budget {
        what: &'static str,
        requested: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),
}
