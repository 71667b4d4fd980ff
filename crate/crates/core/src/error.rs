use thiserror::Error;

/// Errors raised by the library operations.
///
/// Mathematical check failures (an axiom that does not hold, a round trip
/// that does not close) are reported as data in the various report types;
/// this enum only covers malformed inputs and violated preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("antisymmetry violated: `{0}` <= `{1}` <= `{0}` with distinct elements")]
    AntisymmetryViolation(String, String),
    #[error("carrier mismatch")]
    CarrierMismatch,
    #[error("empty carrier")]
    EmptyCarrier,
    #[error("function is not a member of the skeleton")]
    NotInSkeleton,
    #[error("map is not a morphism: {0}")]
    NotAMorphism(String),
    #[error("not representable as a difference of skeleton members: `{0}` and `{1}` are equivalent but take different values")]
    NotRepresentable(String, String),
    #[error("function is not constant on the blocks of the algebra (`{0}` vs `{1}`)")]
    NotBlockConstant(String, String),
    #[error("function is not monotone: `{0}` <= `{1}` but f(`{0}`) > f(`{1}`)")]
    NotMonotone(String, String),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("no approximant pair within tolerance {0}")]
    NoApproximantWithinTolerance(String),
    #[error("instance too large to enumerate: {size} points (cap {cap})")]
    TooLargeToEnumerate { size: usize, cap: usize },
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
