use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation at a point outside the domain of a response function,
    /// e.g. the simple pole at zero frequency.
    #[error("{quantity} is undefined at {parameter} = {value}")]
    Domain {
        quantity: &'static str,
        parameter: &'static str,
        value: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature configuration error: {0}")]
    Config(String),

    #[error("quadrature did not converge ({context}): partial value {value:e}, error estimate {error_estimate:e}")]
    NonConvergence {
        context: String,
        value: f64,
        error_estimate: f64,
    },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("grid too coarse: {0}")]
    Resolution(String),

    #[error("search window: {0}")]
    Window(String),

    #[error("at {location}: {source}")]
    At {
        location: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn non_convergence(context: impl Into<String>, value: f64, error_estimate: f64) -> Self {
        Error::NonConvergence {
            context: context.into(),
            value,
            error_estimate,
        }
    }

    /// Attaches the grid point (or parameter set) at which this error occurred.
    pub fn at(self, location: impl Into<String>) -> Self {
        Error::At {
            location: location.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with all location wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_non_convergence(&self) -> bool {
        matches!(self.root(), Error::NonConvergence { .. })
    }
}
