//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A structurally invalid argument (bad sample count, unknown id, ...).
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A scenario configuration problem, reported with its field path.
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    /// A command packet that does not parse or violates its bounds.
    #[error("malformed packet: {0}")]
    Packet(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: msg.into(),
        }
    }

    pub(crate) fn packet(msg: impl Into<String>) -> Self {
        Error::Packet(msg.into())
    }
}
