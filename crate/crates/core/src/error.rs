//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two operands live over different coefficient rings (`q` mismatch).
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    /// Vector or matrix dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Exact linear solve hit a singular matrix.
    #[error("singular matrix")]
    Singular,

    /// A group presentation failed validation.
    #[error("invalid group spec: {0}")]
    Spec(String),

    /// The requested decision path needs a property the spec does not have.
    #[error("unsupported group spec: {0}")]
    UnsupportedSpec(String),

    /// A breadth-first search exceeded its memory budget.
    #[error("resource limit exceeded: {0} states enumerated, budget {1} bytes")]
    ResourceLimit(u64, u64),

    /// BFS exhausted the allowed radius without locating the target.
    #[error("not found within radius {0}")]
    OutOfRange(u32),

    /// A string failed to parse under one of the element grammars.
    #[error("parse error ({grammar}): {message}")]
    Parse {
        grammar: &'static str,
        message: String,
    },

    /// An asserted inequality failed during an audit.
    #[error("bound violation: {0}")]
    BoundViolation(String),

    /// Output file could not be written.
    #[error("io error: {0}")]
    Io(String),
}
