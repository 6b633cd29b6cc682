//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input text or corpus yielded no countable symbols.
    #[error("empty corpus: {0}")]
    EmptyCorpus(String),

    /// A rule file line could not be parsed. Line numbers are 1-based.
    #[error("rule parse error at line {line}: {message}")]
    RuleParse { line: usize, message: String },

    /// A metric is not defined for the given distribution (e.g. too few ranks).
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    /// A caller-supplied parameter was out of range or inconsistent.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Text and ruleset disagree on the diacritic mode.
    #[error("diacritic mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
