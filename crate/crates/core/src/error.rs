use thiserror::Error;

/// Errors raised while building profiles, solving, analysing or running experiments.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mollifier profile: {invariant} violated ({detail})")]
    InvalidMollifier {
        invariant: &'static str,
        detail: String,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("ladder too short: {0} points, at least 4 required")]
    LadderTooShort(usize),

    #[error("domain too small: {0}")]
    DomainTooSmall(String),

    #[error("time step {dt:e} exceeds the bound {bound:e} ({which})")]
    StepTooLarge {
        dt: f64,
        bound: f64,
        which: &'static str,
    },

    #[error("label spacing {dx:e} does not resolve the data mollifier (bound {bound:e})")]
    UnderResolved { dx: f64, bound: f64 },

    #[error("initial data rejected: {0}")]
    NonSmoothData(String),

    #[error("request outside the solved window: {0}")]
    OutsideWindow(String),

    #[error("mismatched runs: {0}")]
    MismatchedRuns(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
