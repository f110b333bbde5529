use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("zero input where a nonzero scalar is required")]
    ZeroInput,
    #[error("ring mismatch")]
    RingMismatch,
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("map carries no word factorization")]
    NoWordFactorization,
    #[error("derivation is not locally nilpotent within the bound")]
    NotLocallyNilpotent,
    #[error("(F* - Id) did not become nilpotent within {0} steps")]
    NotUnipotentWithinBound(usize),
    #[error("scalar {0} is a root of unity")]
    RootOfUnityScalar(String),
    #[error("weight range too small or map not semisimple with these weights")]
    RangeTooSmall,
    #[error("singular linear system")]
    SingularSystem,
    #[error("map is not semisimple within the weight budget")]
    NotSemisimple,
    #[error("F^r does not equal the flow at h")]
    PowerMismatch,
    #[error("no root of {0} of order {1} in the declared field")]
    NoRootInField(String, u32),
    #[error("finite part does not satisfy Delta^{0} = Id")]
    FinitePartNotOrder(u32),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid normal-form parameters: {0}")]
    InvalidFormParameters(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::ZeroInput => "ZeroInput",
            Error::RingMismatch => "RingMismatch",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::Parse(_) => "Parse",
            Error::InvalidInput(_) => "InvalidInput",
            Error::NoWordFactorization => "NoWordFactorization",
            Error::NotLocallyNilpotent => "NotLocallyNilpotent",
            Error::NotUnipotentWithinBound(_) => "NotUnipotentWithinBound",
            Error::RootOfUnityScalar(_) => "RootOfUnityScalar",
            Error::RangeTooSmall => "RangeTooSmall",
            Error::SingularSystem => "SingularSystem",
            Error::NotSemisimple => "NotSemisimple",
            Error::PowerMismatch => "PowerMismatch",
            Error::NoRootInField(..) => "NoRootInField",
            Error::FinitePartNotOrder(_) => "FinitePartNotOrder",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::InvalidFormParameters(_) => "InvalidFormParameters",
            Error::Internal(_) => "Internal",
        }
    }
}
