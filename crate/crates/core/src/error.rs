use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown problem id {0} (valid ids are 1..=9)")]
    UnknownProblem(u32),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("objective returned a non-finite value ({value}) after {evaluations} evaluations")]
    NonFinite { value: f64, evaluations: u64 },

    #[error("step size underflow (sigma = {sigma:e}) after {evaluations} evaluations")]
    Stagnation { sigma: f64, evaluations: u64 },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
