// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the estimation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("correlation {0} is outside [-1, 1]")]
    CorrelationDomain(f64),

    #[error("invalid word statistics: {0}")]
    InvalidStats(String),

    #[error("stimulus stream needs at least 2 words, got {0}")]
    StreamTooShort(usize),

    #[error("word {word} does not fit in {width} bits")]
    WordOutOfRange { word: i64, width: u32 },

    #[error("unsupported {kind} width {width}")]
    UnsupportedWidth { kind: String, width: u32 },

    #[error("unknown architecture `{0}`")]
    UnknownArchitecture(String),

    #[error("column {column} is outside the output width {width}")]
    ColumnOutOfRange { column: u32, width: u32 },

    #[error("malformed netlist: {0}")]
    MalformedNetlist(String),

    #[error("stimulus mismatch: {0}")]
    StimulusMismatch(String),

    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),

    #[error("no sigma realizes bp1 = {bp1} at rho = {rho} within {width} bits")]
    UnsolvableSigma { bp1: u32, rho: f64, width: u32 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
