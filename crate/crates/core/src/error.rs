use thiserror::Error;

use crate::ctrs::Violation;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("position {position} is not a position of {term}")]
    InvalidPosition { position: String, term: String },

    #[error("replacement map has no entry for symbol {0}")]
    MissingMu(String),

    #[error("replacement map entry {index} is outside 1..={arity} for symbol {symbol}")]
    MuOutOfRange {
        symbol: String,
        index: usize,
        arity: usize,
    },

    #[error("rule {rule} has {len} conditions, index {index} is out of range")]
    ConditionIndex {
        rule: String,
        index: usize,
        len: usize,
    },

    #[error("no rule named {0}")]
    UnknownRule(String),

    #[error("rules are not a DCTRS: {}", format_violations(.0))]
    InvalidRules(Vec<Violation>),

    #[error("seed {0} is not an original term")]
    NonOriginalSeed(String),

    #[error("symbol {0} does not occur in the precedence")]
    UnknownSymbol(String),

    #[error(
        "signature has {size} symbols, above the precedence search cap of {cap}; use an external prover"
    )]
    SignatureTooLarge { size: usize, cap: usize },

    #[error("fuel bounds must be strictly positive")]
    InvalidFuel,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ALARM: {0}")]
    Alarm(String),
}

fn format_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
