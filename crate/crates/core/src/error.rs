use thiserror::Error;

/// Errors raised by the finite-field toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a positive integer, got 0")]
    ZeroArgument,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{divisor} does not divide {n}")]
    NotADivisor { divisor: u64, n: u64 },
    #[error("field of cardinality {requested} exceeds the configured cap {cap}")]
    CapExceeded { requested: u128, cap: u64 },
    #[error("enumeration of {needed} candidates exceeds the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("operation on the zero element")]
    ZeroElement,
    #[error("operands belong to different fields: F_{{{0}}} and F_{{{1}}}")]
    MixedFields(String, String),
    #[error("F_{{{p}^{m}}} is not a subfield of F_{{{p}^{k}}}")]
    NotASubfield { p: u32, m: u32, k: u32 },
    #[error("element index {index} out of range for a field of {order} elements")]
    IndexOutOfRange { index: u64, order: u64 },
    #[error("field F_{{{0}}} has no discrete-log table")]
    MissingLogTable(String),
    #[error("element lies in the base field")]
    ElementInBaseField,
    #[error("the set contains 0")]
    ZeroInSet,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("polynomial is reducible")]
    ReduciblePolynomial,
    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("internal failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by a resource limit rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
