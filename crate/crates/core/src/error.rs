use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} is outside its domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid interval [{a}, {b}]: need finite a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("integrand is not finite at node t = {node} (value {value})")]
    NonFiniteIntegrand { node: f64, value: f64 },

    #[error("function evaluates to {value} at x = {x}")]
    Evaluation { x: f64, value: f64 },

    #[error("function value {value} at x = {x} must be positive")]
    NonPositive { x: f64, value: f64 },

    #[error("points must be pairwise distinct, got ({x}, {y}, {z})")]
    CoincidentPoints { x: f64, y: f64, z: f64 },

    #[error("{0}")]
    DivergentMoment(String),

    #[error("precondition of {theorem} not met: {reason}")]
    Precondition { theorem: String, reason: String },

    #[error("{theorem} needs a value for {what}")]
    MissingParameter { theorem: String, what: &'static str },

    #[error("{theorem}: side {side} is not finite ({value})")]
    NonFiniteSide {
        theorem: String,
        side: &'static str,
        value: f64,
    },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(what: &'static str, input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        what,
        input: input.to_string(),
        reason: reason.into(),
    }
}
