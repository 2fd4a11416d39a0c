use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into three families: configuration/validation problems
/// (bad input, exceeded budgets), precondition failures of a particular
/// operation, and internal invariant violations that indicate a bug (exact
/// identities that failed to hold). The CLI maps the last family to exit
/// code 2 and everything else to exit code 1.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field element {value} does not belong to F_{q}")]
    ContextMismatch { value: u32, q: u64 },

    #[error("invalid polynomial: {0}")]
    InvalidPoly(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("enumeration of {size} elements exceeds the budget of {limit}")]
    BudgetExceeded { size: u128, limit: u64 },

    #[error("insufficient precision: need {needed} tail coefficients, have {available}")]
    Precision { needed: usize, available: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid constraint at index {index}: {rule}")]
    Constraint { index: usize, rule: String },

    #[error("invalid constraint set: {0}")]
    ConstraintSet(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures of an exact identity or a checked bound, as
    /// opposed to bad input.
    pub fn is_assertion(&self) -> bool {
        matches!(self, Error::Assertion(_) | Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
