use thiserror::Error;

/// Errors raised by the discovery library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,
    #[error("frequency {0} appears more than once in the spectrum")]
    DuplicateFrequency(u64),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("operation needs per-species frequencies, but the summary only holds a spectrum")]
    NeedsFrequencies,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("sample too small: {0}")]
    InsufficientSample(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision loss: {digits:.1} decimal digits cancelled (budget {budget:.1})")]
    PrecisionLoss { digits: f64, budget: f64 },
    #[error("computation infeasible: {0}")]
    Infeasible(String),
    #[error("target out of range: {0}")]
    OutOfRange(String),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("spectrum has too few populated frequencies: {0}")]
    InsufficientSpectrum(String),
    #[error("unknown species: {0}")]
    UnknownSpecies(String),
    #[error("invalid sampler state: {0}")]
    InvalidState(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("sampler stalled after {0} proposals")]
    SamplerStall(u64),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
