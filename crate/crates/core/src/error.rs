use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("pencil eigenvalues are irrational: a = {a}, b = {b} (b^2 + 4a is not a rational square)")]
    IrrationalEigenvalues { a: String, b: String },

    #[error("operator is not a near-derivation")]
    NotNearDerivation,

    #[error("operator is not a derivation")]
    NotDerivation,

    #[error("operator is not Nijenhuis (torsion nonzero on basis pair ({0}, {1}))")]
    NotNijenhuis(usize, usize),

    #[error("precondition violated at power {power}")]
    PreconditionViolated { power: usize },

    #[error("structure tensor is not a Lie bracket: {0}")]
    NotLie(String),

    #[error("invalid grading: {0}")]
    InvalidGrading(String),

    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid family or size: {0}")]
    InvalidFamily(String),

    #[error("element is not self-adjoint for the involution")]
    NotSelfAdjoint,

    #[error("invalid involution matrix: {0}")]
    InvalidInvolution(String),

    #[error("seed {seed} is not central: bracket with generator {generator} is nonzero")]
    NotCentral { seed: usize, generator: usize },

    #[error("unsupported operator: {0}")]
    Unsupported(String),

    #[error("exact mode refused: dimension {dim} exceeds limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("identity violated: {0}")]
    IdentityViolated(String),

    #[error("vector does not lie in the span of the basis")]
    NotInSpan,

    #[error("{0}")]
    Parse(String),
}
