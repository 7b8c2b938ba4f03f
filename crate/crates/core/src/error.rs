use thiserror::Error;

use crate::multicomplex::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("malformed simplicial complex: {0}")]
    MalformedComplex(String),

    #[error("not a simplicial map: {0}")]
    NotSimplicial(String),

    #[error("not a simplicial covering: {0}")]
    NotCovering(String),

    #[error("no fundamental cycle: {0}")]
    NoFundamentalCycle(String),

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    #[error("not a chain map: {0}")]
    NotChainMap(String),

    #[error("invalid multicomplex: {} identity failure(s), {} structural failure(s)", .0.identity_failures.len(), .0.structural_failures.len())]
    InvalidMulticomplex(Box<ValidationReport>),

    #[error("invalid flow presentation: {0}")]
    InvalidFlowData(String),

    #[error("inconsistent flow data: {} identity failure(s), first at {}", .0.identity_failures.len(), .0.first_failure_location())]
    InconsistentFlowData(Box<ValidationReport>),

    #[error("invalid Morse-Smale data: {0}")]
    InvalidMorseData(String),

    #[error("multicomplex is not Morse-shaped: {0}")]
    NotMorseShaped(String),

    #[error("cannot parse input: {0}")]
    Parse(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
