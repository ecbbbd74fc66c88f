use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input is not integral where an integer matrix is required")]
    NonIntegerInput,
    #[error("zero vector")]
    ZeroVector,
    #[error("vector does not lie in the span")]
    NotInSpan,
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("scalar product must be symmetric positive definite")]
    InvalidScalarProduct,
    #[error("subspace is not rational")]
    NotRational,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("series not divisible: nonzero coefficient in degree {degree}")]
    NotDivisible { degree: usize },
    #[error("germ is not analytic")]
    NotAnalytic,
    #[error("requested order {requested} exceeds available precision {available}")]
    OrderUnderflow { requested: i64, available: i64 },
    #[error("empty input")]
    EmptyInput,
    #[error("not a face")]
    NotAFace,
    #[error("cone is not simplicial")]
    NonSimplicial,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone is not solid")]
    NotSolid,
    #[error("polytope is not full dimensional")]
    NotFullDimensional,
    #[error("cone is not unimodular")]
    NotUnimodular,
    #[error("unsupported dimension {0}")]
    DimensionUnsupported(usize),
    #[error("too many variables ({0})")]
    TooManyVariables(usize),
    #[error("arguments are not coprime")]
    NotCoprime,
    #[error("enumeration cap exceeded: {needed} > {cap}")]
    CapExceeded { needed: String, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
