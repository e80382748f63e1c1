use std::path::PathBuf;

/// Errors produced anywhere in the solver pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value {value} when evaluating at vertex {vertex}")]
    Evaluation { vertex: usize, value: f64 },

    #[error("degenerate director at vertex {vertex}: |n| = 0")]
    DegenerateDirector { vertex: usize },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("conjugate gradients did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("non-finite entry in linear system")]
    NonFinite,

    #[error("operator is not positive definite on the constrained space ({0})")]
    NotPositiveDefinite(String),

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

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
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
