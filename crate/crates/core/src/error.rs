use thiserror::Error;

/// Errors produced by construction and validation of algebraic data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("unstable parameters: genus {genus}, legs {legs} (need 2g-2+n > 0{extra})")]
    Unstable {
        genus: usize,
        legs: usize,
        extra: &'static str,
    },

    #[error("scale bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("enumeration bound {given} is below the required bound {needed}; refusing to truncate")]
    IncompleteBound { given: usize, needed: usize },

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn bad_input(msg: impl Into<String>) -> Self {
        Error::BadInput(msg.into())
    }
}
