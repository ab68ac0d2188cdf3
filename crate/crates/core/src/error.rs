use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its invariant. `name` is the offending field.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// A configuration key is unknown or its value cannot be used.
    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("cannot parse config: {0}")]
    Parse(String),

    #[error("{path}: {reason}")]
    Io { path: String, reason: String },

    /// The closed loop diverged; `time` is the simulation time of the failing step.
    #[error("numerical blow-up at t = {time} s")]
    BlowUp { time: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
