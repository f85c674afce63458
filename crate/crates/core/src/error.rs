use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),

    #[error("polynomials live in different variable sets")]
    VariableMismatch,

    #[error("elements belong to different rings")]
    RingMismatch,

    #[error("polynomial is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("monomial {0} is not in the ambient basis")]
    NotInAmbient(String),

    #[error("containment violated in degree {degree}")]
    ContainmentViolation { degree: u32 },

    #[error("length sum did not stabilize: nonzero summand in degree {degree} (t_max = {t_max})")]
    NotStabilized { degree: u32, t_max: u32 },

    #[error("parameter ideal does not have finite colength (nonzero in degree {degree})")]
    InfiniteColength { degree: u32 },

    #[error("no reduction found after {attempts} attempts (seed {seed})")]
    RetriesExhausted { attempts: u32, seed: u64 },

    #[error("inconsistent length data: {0}")]
    Inconsistent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("intersection matrix is not negative definite")]
    NotNegativeDefinite,

    #[error("dual graph is not connected")]
    Disconnected,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("graph file: {0}")]
    GraphFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for bad input, 3 for internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_)
            | Error::GraphFile(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::NotNegativeDefinite
            | Error::Disconnected
            | Error::Precondition(_) => 2,
            _ => 3,
        }
    }
}
