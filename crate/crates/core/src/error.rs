use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a documented domain restriction.
    #[error("{field} {requirement} (got {value})")]
    Domain {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// Mismatched shapes or otherwise malformed arguments.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("singular pivot at row {pivot}")]
    SingularPivot { pivot: usize },

    #[error("newton iteration did not converge after {iterations} iterations (residual trace: {trace:?})")]
    NewtonFailed { iterations: usize, trace: Vec<f64> },

    #[error("root iteration did not converge after {iterations} iterations (last iterate {last})")]
    RootNotConverged { iterations: usize, last: f64 },

    /// A failure inside one named scenario of a batch run.
    #[error("scenario {scenario}: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(field: &'static str, requirement: &'static str, value: f64) -> Self {
        Error::Domain {
            field,
            requirement,
            value,
        }
    }

    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::SingularPivot { .. }
            | Error::NewtonFailed { .. }
            | Error::RootNotConverged { .. } => true,
            Error::Scenario { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}
