//! Error taxonomy shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A precondition on an argument value was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Operands have incompatible dimensions.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    /// A measurement outcome with zero Born probability was requested.
    #[error("impossible outcome: {0}")]
    ImpossibleOutcome(String),

    /// An input violated a structural contract (non-hermitian observable,
    /// non-orthonormal mode basis, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// The requested computation is outside the supported class.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A hard size cap would be exceeded.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
