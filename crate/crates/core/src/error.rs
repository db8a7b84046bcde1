use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid symbol {0:?}: words are over the alphabet {{0, 1}}")]
    InvalidSymbol(char),

    #[error("parameter `{name}` out of range: {reason}")]
    OutOfRange { name: &'static str, reason: String },

    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: u64, q: u64 },

    #[error("factor length {n} exceeds word length {len}")]
    FactorTooLong { n: usize, len: usize },

    #[error("empty word")]
    EmptyWord,

    #[error("need {needed} symbols but the source provides only {available}")]
    InsufficientSymbols { needed: usize, available: usize },

    #[error("function undefined at {0:?}")]
    UndefinedAt(Vec<i64>),

    #[error("measures have different barycenters ({left} vs {right})")]
    BarycenterMismatch { left: String, right: String },

    #[error("exhaustive bound exceeded: {what} = {value} > {limit}")]
    ExhaustiveBound {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, reason: impl Into<String>) -> Self {
        Error::OutOfRange {
            name,
            reason: reason.into(),
        }
    }
}
