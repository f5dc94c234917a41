use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field context mismatch: {left} vs {right}")]
    ContextMismatch { left: String, right: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero linear form is not a hyperplane")]
    ZeroForm,

    #[error("polynomial division left a nonzero remainder")]
    NotDivisible,

    #[error("hyperplane not present in the arrangement: {0}")]
    HyperplaneNotFound(String),

    #[error("hyperplane has multiplicity zero: {0}")]
    MultiplicityZero(String),

    #[error("operation requires a simple arrangement")]
    NotSimple,

    #[error("operation requires a free arrangement with 1 among its exponents")]
    NotFreeWithExponentOne,

    #[error("flat does not belong to the intersection lattice")]
    FlatNotInLattice,

    #[error("flats are not nested as required")]
    FlatsNotNested,

    #[error("chain replay mismatch at step {step}: {message}")]
    ReplayMismatch { step: usize, message: String },

    #[error("exponent records are inconsistent: {0}")]
    InconsistentExponents(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
