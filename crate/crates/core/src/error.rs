use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("field order {p}^{k} exceeds the budget of {budget} elements")]
    OrderOverBudget { p: u64, k: u32, budget: u64 },
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("index {index} out of range (must be below {bound})")]
    IndexOutOfRange { index: String, bound: String },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("coefficient {value} out of range for a field with {order} elements")]
    CoefficientOutOfRange { value: String, order: u64 },
    #[error("polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("polynomial must be nonconstant: {0}")]
    ConstantPolynomial(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("budget exceeded: {required} > {budget} ({what})")]
    BudgetExceeded {
        what: &'static str,
        required: String,
        budget: u64,
    },
    #[error("characteristic polynomial {0} is reducible")]
    ReducibleCharpoly(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("formula produced a non-integer value {0}")]
    NonIntegral(String),
}

impl Error {
    /// Stable machine-readable code used by the command-line envelope.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::InvalidDegree => "invalid_degree",
            Error::OrderOverBudget { .. } => "order_over_budget",
            Error::ZeroInverse => "zero_inverse",
            Error::MixedFields => "mixed_fields",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::DivisionByZero => "division_by_zero",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::Parse { .. } => "parse_error",
            Error::CoefficientOutOfRange { .. } => "coefficient_out_of_range",
            Error::NotMonic(_) => "not_monic",
            Error::ConstantPolynomial(_) => "constant_polynomial",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::Singular => "singular_matrix",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::ReducibleCharpoly(_) => "reducible_charpoly",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NonIntegral(_) => "non_integral",
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::OrderOverBudget { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
