use thiserror::Error;

/// Errors raised by the pricing engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A lattice parameterization produced a probability outside `[0, 1]`.
    #[error("invalid parameterization for {method}: {name} = {value} lies outside [0, 1]")]
    InvalidParameterization {
        method: &'static str,
        name: &'static str,
        value: f64,
    },

    /// The censored lattice hit a non-finite value.
    #[error("lattice build failed at level {level}, node {node}: {what} is not finite")]
    NonFinite {
        level: usize,
        node: usize,
        what: &'static str,
    },

    /// A statistic is undefined for the given sample (e.g. zero variance).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Not enough observations for the requested computation.
    #[error("need at least {required} observations, got {got}")]
    TooShort { required: usize, got: usize },

    /// Two inputs that must agree in length do not.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Malformed tabular input.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
        match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(e.to_string()),
            _ => Error::Parse {
                line,
                message: e.to_string(),
            },
        }
    }
}
