use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not in the Lie algebra of the group: {0}")]
    NotInAlgebra(String),
    #[error("matrix is not of Hermitian type: {0}")]
    NotHermitianType(String),
    #[error("weights or tau are not rational: {0}")]
    NonRationalWeights(String),
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("maximal weight is +infinity; the ray diverges")]
    DivergentRay,
    #[error("jacobian is numerically singular (condition estimate {0:.3e})")]
    SingularJacobian(f64),
    #[error("group action overflowed the floating-point range")]
    ActionOverflow,
    #[error("linear solve failed: {0}")]
    LinearSolveFailure(String),
    #[error("invalid problem data: {0}")]
    InvalidProblem(String),
    #[error("solver exhausted its budget without a certificate: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
