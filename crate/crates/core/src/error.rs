use thiserror::Error;

/// Errors raised by evaluators, samplers and the validation harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-convergence: {0}")]
    NonConvergence(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("truncation cap exceeded: {0}")]
    Truncation(String),
    #[error("signed law: {0}")]
    SignedLaw(String),
    #[error("domain gap: {0}")]
    DomainGap(String),
    #[error("diagnostic: {0}")]
    Diagnostic(String),
    #[error("empty sample")]
    EmptySample,
}

impl Error {
    /// True for errors caused by caller-supplied parameters (as opposed to numerics).
    pub fn is_parameter_error(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::DomainGap(_) | Error::SignedLaw(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}
