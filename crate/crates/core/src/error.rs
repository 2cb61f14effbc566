use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("points span an affine subspace of dimension {rank}, expected {dim}")]
    LowerDimensional { rank: usize, dim: usize },

    #[error("halfspace system is unbounded")]
    Unbounded,

    #[error("halfspace system is infeasible")]
    EmptyPolytope,

    #[error("enumeration budget exceeded: needed about {required}, budget {budget}")]
    BudgetExceeded { budget: u64, required: u64 },

    #[error("direction functional must be nonzero")]
    ZeroDirection,

    #[error("operation requires a lattice polytope (integral vertices)")]
    NonLatticePolytope,

    #[error("operation requires a Delzant polytope")]
    NotDelzant,

    #[error("wrong dimension: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("vectors are not linearly independent")]
    IndependenceViolation,

    #[error("no positive facet-normal relation found")]
    NoPositiveRelation,

    #[error("coordinates exceed the supported integer range")]
    Overflow,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
