use thiserror::Error;

use crate::linalg::IntVector;
use crate::report::ValidationReport;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("relation space has dimension {0}, at most 1 allowed")]
    NullityTooLarge(usize),
    #[error("input vectors are linearly dependent")]
    DependentInput,
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("point {0} is not in the support of the fan")]
    NotInSupport(String),
    #[error("invalid fan:\n{0}")]
    InvalidFan(ValidationReport),
    #[error("invalid cobordism:\n{0}")]
    InvalidCobordism(ValidationReport),
    #[error("vertical ray {0} (zero projection)")]
    VerticalRay(IntVector),
    #[error("subdivision center {0} is not in the support of the running fan")]
    CenterNotInSupport(IntVector),
    #[error("subdivision center {0} is already a ray of the running fan")]
    CenterAlreadyRay(IntVector),
    #[error("cobordism is not collapsible (circuit cycle of length {0})")]
    NotCollapsible(usize),
    #[error("front mismatch: {0}")]
    FrontMismatch(String),
    #[error("intermediate fan is broken:\n{0}")]
    BrokenFan(ValidationReport),
    #[error("degenerate circuit: all nonzero coefficients share one sign")]
    DegenerateCircuit,
    #[error("midray of a ray with itself")]
    EqualRays,
    #[error("not every cone points up: {0}")]
    NotAllPointingUp(String),
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
