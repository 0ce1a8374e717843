use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },

    #[error("redundancy {r} exceeds the coset-leader table limit of {limit}")]
    TableLimit { r: usize, limit: usize },

    /// A brute-force enumeration would exceed its work bound.
    #[error("feasibility guard exceeded: {what} needs ~{needed:.3e} checks, bound is {bound:.0e}")]
    Feasibility {
        what: String,
        needed: f64,
        bound: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("radius mismatch: file claims {claimed}, verified {verified}")]
    RadiusMismatch { claimed: usize, verified: usize },
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors raised by work-bound guards rather than bad input.
    pub fn is_feasibility(&self) -> bool {
        matches!(self, Error::Feasibility { .. } | Error::TableLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
