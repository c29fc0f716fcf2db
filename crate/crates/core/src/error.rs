use thiserror::Error;

/// Errors raised by the workbench. Check failures are not errors; they are
/// carried as report content.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance too large: {what} needs {size} elements, cap is {cap}")]
    InstanceTooLarge {
        what: String,
        size: String,
        cap: usize,
    },

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("invalid function table: {0}")]
    InvalidTable(String),

    #[error("not surjective: {0}")]
    NotSurjective(String),

    #[error("not injective: {0}")]
    NotInjective(String),

    #[error("square does not commute at {0}")]
    NotCommuting(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("operation `{0}` is not covered by the interpretation")]
    Uncovered(String),

    #[error("ill-typed term: {0}")]
    IllTypedTerm(String),

    #[error("object of size {0} has not been saturated")]
    NotSaturated(usize),

    /// The induced structure on R left R at a concrete instance.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn too_large(what: impl Into<String>, size: impl ToString, cap: usize) -> Self {
        Error::InstanceTooLarge {
            what: what.into(),
            size: size.to_string(),
            cap,
        }
    }
}
