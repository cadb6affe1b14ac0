use thiserror::Error;

/// Errors raised by the numerical kernels, the expression language and the registry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("series did not converge: {0}")]
    Divergence(String),

    #[error("invalid hypergeometric parameters: {0}")]
    InvalidParameter(String),

    #[error("analytic continuation failed: {0}")]
    Continuation(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("no relation found: {0}")]
    NotFound(String),

    #[error("registry error: {0}")]
    Registry(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
