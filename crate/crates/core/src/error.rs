use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid entry: {0}")]
    InvalidEntry(String),
    #[error("entries sum to {0}, not zero")]
    SumNotZero(i64),
    #[error("trivial system: the family parameter cancels completely")]
    TrivialSystem,
    #[error("gamma vector is not prime (gcd {0})")]
    NotPrime(i64),
    #[error("first row of A is not all ones")]
    RowOneNotOnes,
    #[error("kernel condition failed: {0}")]
    KernelConditionFailed(String),
    #[error("twist condition failed: gamma . k = {0}")]
    TwistConditionFailed(String),
    #[error("matrix is not unimodular (det {0})")]
    NotUnimodular(String),
    #[error("singular fibre criterion fails")]
    CriterionFails,
    #[error("point lies outside the cone")]
    PointOutsideCone,
    #[error("degenerate model: quotient is zero")]
    DegenerateModel,
    #[error("form cannot be reduced: {0}")]
    UnreducibleForm(String),
    #[error("point is interior; no weight eigenvalues")]
    InteriorPoint,
    #[error("class reduces to zero")]
    ZeroClass,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("gamma vector has more than one negative entry")]
    MultipleNegativeEntries,
    #[error("insufficient truncation: need at least {need}, got {got}")]
    InsufficientTruncation { need: usize, got: usize },
    #[error("zero Pochhammer symbol in denominator")]
    ZeroPochhammer,
    #[error("not a quadrilateral sign pattern")]
    NotQuadrilateral,
    #[error("gamma vector contains an opposite pair")]
    OppositePair,
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    /// Stable machine-readable code for reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidEntry(_) => "InvalidEntry",
            Error::SumNotZero(_) => "SumNotZero",
            Error::TrivialSystem => "TrivialSystem",
            Error::NotPrime(_) => "NotPrime",
            Error::RowOneNotOnes => "RowOneNotOnes",
            Error::KernelConditionFailed(_) => "KernelConditionFailed",
            Error::TwistConditionFailed(_) => "TwistConditionFailed",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::CriterionFails => "CriterionFails",
            Error::PointOutsideCone => "PointOutsideCone",
            Error::DegenerateModel => "DegenerateModel",
            Error::UnreducibleForm(_) => "UnreducibleForm",
            Error::InteriorPoint => "InteriorPoint",
            Error::ZeroClass => "ZeroClass",
            Error::Unsupported(_) => "Unsupported",
            Error::MultipleNegativeEntries => "MultipleNegativeEntries",
            Error::InsufficientTruncation { .. } => "InsufficientTruncation",
            Error::ZeroPochhammer => "ZeroPochhammer",
            Error::NotQuadrilateral => "NotQuadrilateral",
            Error::OppositePair => "OppositePair",
            Error::BoundExceeded(_) => "BoundExceeded",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse { .. } => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
