use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A weight or potential produced a non-finite value at a quadrature abscissa.
    #[error("singular evaluation at r = {at:e}")]
    SingularEvaluation { at: f64 },

    /// The shooting solution crossed zero; the quadratic form is indefinite.
    #[error("nodal solution: phi changes sign near r = {radius:e}")]
    NodalSolution { radius: f64 },

    #[error("integrator step failure at t = {t:e}: {reason}")]
    StepFailure { t: f64, reason: String },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures that come from the numerics rather than from malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularEvaluation { .. } | Error::NodalSolution { .. } | Error::StepFailure { .. }
        )
    }
}
