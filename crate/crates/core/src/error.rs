//! Error type shared across the crate.

/// Everything that can go wrong while configuring or running an experiment.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration value violates an invariant. `details` names every
    /// offending field.
    #[error("invalid configuration: {details}")]
    InvalidConfig { details: String },

    /// An argument is outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions. The best estimate and
    /// its error bound are preserved so callers can decide whether the
    /// accuracy is still acceptable.
    #[error(
        "quadrature did not converge: best estimate {estimate:e}, error bound {error_bound:e}"
    )]
    QuadratureFailure { estimate: f64, error_bound: f64 },

    /// A scenario file failed to parse; `line` is 1-based.
    #[error("scenario parse error at line {line}: {message}")]
    ScenarioParse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(details: impl Into<String>) -> Self {
        Error::InvalidConfig {
            details: details.into(),
        }
    }
}
