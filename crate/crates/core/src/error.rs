use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse grouping of failures, used by the CLI and the C interface to pick
/// an exit/status code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or an invalid parameter value.
    Usage,
    /// A documented precondition of an operation does not hold.
    Precondition,
    /// The numerics failed (step-size collapse, branch jump, blow-up).
    Numeric,
    /// Filesystem or serialization failure.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("logarithm of zero")]
    Domain,
    #[error("adaptive step collapsed to {step:e} at t = {t}")]
    StepSizeUnderflow { t: f64, step: f64 },
    #[error("matrix is not upper triangular: entry ({row}, {col}) is nonzero")]
    NotUpperTriangular { row: usize, col: usize },
    #[error("section of order {needed} needs Maclaurin coefficients up to c_{needed}, have up to c_{available}")]
    InsufficientCoefficients { needed: usize, available: usize },
    #[error("t = {t} lies outside the guaranteed time range [0, {limit}]")]
    OutOfTimeRange { t: f64, limit: f64 },
    #[error("invalid containment radius: M0 = {m0} must exceed |x0| = {abs_x0}")]
    InvalidBound { m0: f64, abs_x0: f64 },
    #[error("governing function has a nonzero coefficient at negative frequency {frequency}")]
    NegativeFrequencyPresent { frequency: i64 },
    #[error("initial value outside the strip: |Im x0| = {abs_im_x0} must be below ln R - 1 = {limit}")]
    InitialOutOfStrip { abs_im_x0: f64, limit: f64 },
    #[error("logarithm branch jump between samples {index} and {next}", next = .index + 1)]
    BranchJump { index: usize },
    #[error("recovery gate failed at sample {index}: error estimate {estimate} exceeds 1/2")]
    GateFailed { index: usize, estimate: f64 },
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("exact solution blows up at t0 = {0}")]
    BlowUpReached(f64),
    #[error("trajectory is on the excluded boundary |exp(-i x0) - 1| = 1")]
    Unclassified,
    #[error("unknown figure id `{0}`")]
    UnknownFigureId(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter(_) | Error::Parse(_) | Error::UnknownFigureId(_) => {
                ErrorKind::Usage
            }
            Error::Domain
            | Error::NotUpperTriangular { .. }
            | Error::InsufficientCoefficients { .. }
            | Error::OutOfTimeRange { .. }
            | Error::InvalidBound { .. }
            | Error::NegativeFrequencyPresent { .. }
            | Error::InitialOutOfStrip { .. }
            | Error::GateFailed { .. }
            | Error::AssumptionViolated(_)
            | Error::Unclassified => ErrorKind::Precondition,
            Error::StepSizeUnderflow { .. } | Error::BranchJump { .. } | Error::BlowUpReached(_) => {
                ErrorKind::Numeric
            }
            Error::Io { .. } | Error::Json(_) | Error::Csv(_) => ErrorKind::Io,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
