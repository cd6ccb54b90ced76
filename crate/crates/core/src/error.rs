use thiserror::Error;

use crate::checkers::CheckReport;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    InvalidType(String),
    #[error("unsupported lattice preset: {0}")]
    UnsupportedPreset(String),
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("Weyl group enumeration exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("weight {0:?} is not dominant for the Levi subsystem")]
    NotDominantForJ(Vec<i64>),
    #[error("module dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: u128, cap: u128 },
    #[error("cocharacter basis shape mismatch: {0}")]
    BasisShapeMismatch(String),
    #[error("central cocharacter search exhausted the box of radius {radius}")]
    SearchBoxExhausted { radius: i64 },
    #[error("criterion preconditions violated: {0}")]
    WrongMode(String),
    #[error("underline enumeration of {size} elements exceeds the cap {cap}")]
    EnumerationCap { size: u128, cap: usize },
    #[error("weight is not p-small: {0}")]
    NotPSmall(String),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("central characters of distinct degrees coincide")]
    OrthogonalityFails(Box<CheckReport>),
    #[error("exterior algebra of dimension {dim} exceeds the oracle cap {cap}")]
    SizeCap { dim: usize, cap: usize },
    #[error("Jacobi identity fails for structure constants: {0}")]
    JacobiFailure(String),
    #[error("weight {weight} outside 0..={max}")]
    WeightOutOfRange { weight: i64, max: i64 },
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
