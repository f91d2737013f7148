use thiserror::Error;

/// Errors produced by model construction, analytics, simulation, and learning.
#[derive(Debug, Error)]
pub enum Error {
    /// A model or run configuration is invalid. The message names the offending field.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Evidence with zero likelihood under every quality; no posterior exists.
    #[error("degenerate evidence: {0}")]
    DegenerateEvidence(String),

    /// A quantity diverges or is mathematically undefined (e.g. the mean of a
    /// Cauchy prior, or a review burden with a vanishing acceptance probability).
    #[error("numerical divergence: {0}")]
    Divergence(String),

    /// Matrix shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A structured record could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Preset name not recognized.
    #[error("unknown preset '{0}' (valid: ICLR2020-L4, ICLR2020-L5, ICLR2021-L4, ICLR2021-L5)")]
    UnknownPreset(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI maps this error to: configuration and parse
    /// problems exit 1, numerical divergence exits 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Divergence(_) | Error::DegenerateEvidence(_) => 2,
            _ => 1,
        }
    }
}
