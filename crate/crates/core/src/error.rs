use thiserror::Error;

use crate::catalog::Interval;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid function spec at {location}: {message}")]
    Spec { location: String, message: String },

    #[error("invalid interval [{lo}, {hi}]: {reason}")]
    Interval {
        lo: f64,
        hi: f64,
        reason: &'static str,
    },

    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(Interval, Interval),

    #[error("{what} {value} lies outside the domain {domain}")]
    OutOfDomain {
        what: &'static str,
        value: String,
        domain: Interval,
    },

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not Riemann integrable: {0}")]
    NotIntegrable(String),

    #[error("undecided within budget: {0}")]
    Undecided(String),

    #[error("function is not pointwise evaluable on {0}")]
    NotPointwise(Interval),

    #[error(
        "no strictly interior mean-value witnesses found (best candidates c1 = {c1}, c2 = {c2})"
    )]
    MeanValueSearch { c1: f64, c2: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn spec(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
