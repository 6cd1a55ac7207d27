use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Degrees of freedom or other integer dimensions are inconsistent.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Lengths of inputs disagree (sigma_B length, histogram edges, ...).
    #[error("shape error: {0}")]
    Shape(String),

    /// An iterative method failed to converge or produced a non-finite value.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A determinant is numerically singular.
    #[error("conditioning error: {0}")]
    Conditioning(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by invalid user input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Dimension(_) | Error::Shape(_) | Error::Parse(_) | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
