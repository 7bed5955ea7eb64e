use thiserror::Error;

/// Every failure mode of the library.
///
/// Guard violations (`TooLarge`, `GuardExceeded`) are kept apart from domain
/// errors so front ends can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("inner lattice is not contained in outer lattice")]
    NotContained,
    #[error("{what}: size {size} exceeds guard {limit}")]
    TooLarge { what: &'static str, size: u64, limit: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("simplex is not in the apartment of the given basis")]
    NotInApartment,
    #[error("period {period} does not divide {n}")]
    BadPeriod { period: usize, n: usize },
    #[error("not a chamber: {0}")]
    NotAChamber(String),
    #[error("labelling is not injective on a simplex")]
    LabelCollision,
    #[error("coefficient dimensions differ across a face and no transition map was supplied")]
    MissingTransition,
    #[error("bad composition: {0}")]
    BadComposition(String),
    #[error("volume ratio did not stabilize: {0}")]
    NotStabilized(String),
    #[error("element does not normalize the chain")]
    NotNormalizing,
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("element is not minimal over the base field")]
    NotMinimal,
    #[error("field is not maximal: [K:F] = {degree}, n = {n}")]
    NotMaximalField { degree: usize, n: usize },
    #[error("a fixed simplex touches the outer shell of the region")]
    BoundaryContact,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for size/guard violations, false for domain errors.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::GuardExceeded(_))
    }

    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch => "FieldMismatch",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::SingularMatrix => "SingularMatrix",
            Error::NotContained => "NotContained",
            Error::TooLarge { .. } => "TooLarge",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotInApartment => "NotInApartment",
            Error::BadPeriod { .. } => "BadPeriod",
            Error::NotAChamber(_) => "NotAChamber",
            Error::LabelCollision => "LabelCollision",
            Error::MissingTransition => "MissingTransition",
            Error::BadComposition(_) => "BadComposition",
            Error::NotStabilized(_) => "NotStabilized",
            Error::NotNormalizing => "NotNormalizing",
            Error::GuardExceeded(_) => "GuardExceeded",
            Error::NotMinimal => "NotMinimal",
            Error::NotMaximalField { .. } => "NotMaximalField",
            Error::BoundaryContact => "BoundaryContact",
            Error::Invalid(_) => "Invalid",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
