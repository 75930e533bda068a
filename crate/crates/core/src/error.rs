use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("quiver has an oriented cycle")]
    CyclicQuiver,
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("window insufficient: {0}")]
    WindowInsufficient(String),
    #[error("not supported for non-Dynkin quivers: {0}")]
    NotDynkin(String),
    #[error("mesh relations violated at {0}")]
    RelationsViolated(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::WindowInsufficient(_) => 2,
            Error::Inconsistent(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
