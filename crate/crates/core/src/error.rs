use thiserror::Error;

/// Errors raised across the library. Variant names double as the
/// machine-readable codes reported by the command line runner.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus must be an odd prime, got {0}")]
    EvenCharacteristic(u64),
    #[error("enumeration of {size} elements exceeds the budget of {cap}")]
    BudgetExceeded { size: String, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    DescriptorMismatch,
    #[error("F_{{{small_q}^{small_m}}} is not a subfield of F_{{{big_q}^{big_m}}}")]
    NotASubfield {
        small_q: u64,
        small_m: usize,
        big_q: u64,
        big_m: usize,
    },
    #[error("internal error: {0}")]
    InternalError(String),
    #[error("specialization t = {0} collides with a fixed root, curve is singular")]
    NotSquarefree(String),
    #[error("q = {q} must exceed 2g = {two_g}")]
    GenusPrimeConflict { q: u64, two_g: usize },
    #[error("polynomial is not squarefree over Q")]
    PolyNotSquarefree,
    #[error("polynomial does not satisfy the CM functional equation")]
    NotCMSymmetric,
    #[error("lift of the real-subfield factorization is inconsistent at l = {0}")]
    InconsistentLift(u64),
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("polynomial is not a quartic")]
    NotQuartic,
    #[error("census bound {have} is below the required {need}")]
    InsufficientCensus { have: u64, need: String },
    #[error("discriminant {0} too small for log log")]
    DegenerateD(String),
    #[error("multiplier must be a unit mod l")]
    BadMultiplier,
    #[error("group of order {0} is too large to enumerate")]
    EnumerationTooLarge(String),
    #[error("prime {0} appears in more than one local condition")]
    ConflictingConstraints(u64),
    #[error("no primes in the auxiliary window ({lo}, {hi})")]
    EmptyWindow { lo: u64, hi: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::EvenCharacteristic(_) => "EvenCharacteristic",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::DivisionByZero => "DivisionByZero",
            Error::DescriptorMismatch => "DescriptorMismatch",
            Error::NotASubfield { .. } => "NotASubfield",
            Error::InternalError(_) => "InternalError",
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::GenusPrimeConflict { .. } => "GenusPrimeConflict",
            Error::PolyNotSquarefree => "NotSquarefree",
            Error::NotCMSymmetric => "NotCMSymmetric",
            Error::InconsistentLift(_) => "InconsistentLift",
            Error::NotIrreducible => "NotIrreducible",
            Error::NotQuartic => "NotQuartic",
            Error::InsufficientCensus { .. } => "InsufficientCensus",
            Error::DegenerateD(_) => "DegenerateD",
            Error::BadMultiplier => "BadMultiplier",
            Error::EnumerationTooLarge(_) => "EnumerationTooLarge",
            Error::ConflictingConstraints(_) => "ConflictingConstraints",
            Error::EmptyWindow { .. } => "EmptyWindow",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
