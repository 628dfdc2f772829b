use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("capacity exceeded: {what} is {value}, limit {limit}")]
    Capacity {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    /// The tensor is not invariant under photon exchange. `pair` holds the
    /// two tuples (rendered as labels) whose coefficients differ the most.
    #[error("tensor is not bosonic-symmetric: violation {violation:.3e} between {} and {}", .pair.0, .pair.1)]
    Symmetry {
        violation: f64,
        pair: (String, String),
    },

    #[error("operation undefined on the zero state")]
    ZeroState,

    #[error("invalid spectral profile: {0}")]
    Profile(String),

    #[error("invalid network: {0}")]
    Network(String),

    #[error("invalid phase grid: {0}")]
    Grid(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn schema(msg: impl Into<String>) -> Self {
        Error::Schema(msg.into())
    }

    pub(crate) fn network(msg: impl Into<String>) -> Self {
        Error::Network(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
