use thiserror::Error;

/// Errors produced by solvers, problem evaluation, and certificates.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point outside domain: {what}")]
    OutOfDomain { what: String },

    #[error("non-finite value encountered in {what}")]
    NonFinite { what: String },

    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },

    #[error("safeguard budget exhausted in {stage} after {budget} iterations")]
    SafeguardExhausted { stage: &'static str, budget: usize },

    #[error("subsolver failed: {0}")]
    Subsolver(Box<Error>),

    #[error("feasibility post-check failed: {what}")]
    FeasibilityCheck { what: String },

    #[error("exact normal-cone distance requires box prox terms ({what})")]
    NotABox { what: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn out_of_domain(what: impl Into<String>) -> Self {
        Error::OutOfDomain { what: what.into() }
    }

    pub fn invalid(what: impl Into<String>) -> Self {
        Error::InvalidParameter { what: what.into() }
    }
}
