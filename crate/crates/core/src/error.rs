//! Error type shared by all modules.

/// Errors reported by pencil construction, solvers, and application drivers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix dimensions do not match: {0}")]
    ShapeMismatch(String),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is identically zero")]
    ZeroMatrix,

    #[error("homogeneous eigenvalue (0, 0) is undefined")]
    ZeroProjective,

    #[error("eigenvalue backend failed: {0}")]
    BackendFailure(String),

    #[error("sampled transform stayed ill-conditioned after {0} attempts")]
    SingularTransform(usize),

    #[error("invalid rank parameter: {0}")]
    InvalidRank(String),

    #[error("selected sub-pencil is degenerate; fall back to a random unitary frame")]
    DegenerateSelection,

    #[error("spectrum was computed without retained eigenvectors")]
    MissingVectors,

    #[error("no common mu eigenvalue within the matching tolerance")]
    NoCommonMu,

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid block structure: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
