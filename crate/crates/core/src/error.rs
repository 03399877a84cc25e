//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different cyclotomic fields")]
    FieldMismatch,
    #[error("Yang-Baxter equation fails on basis triple {0:?}")]
    YBENotSatisfied((usize, usize, usize)),
    #[error("braiding matrix is singular")]
    SingularBraiding,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("degree {degree} exceeds the budget {budget}")]
    DegreeBudgetExceeded { degree: usize, budget: usize },
    #[error("generators do not span a coideal in degree {degree}: {witness}")]
    NotACoideal { degree: usize, witness: String },
    #[error("bracket compatibility fails in degree {n}: {witness}")]
    NotABracket { n: usize, witness: String },
    #[error("bracket domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("braiding is not of Hecke type")]
    NotHecke,
    #[error("Hecke mark {0} is not regular")]
    IrregularMark(String),
    #[error("root of unity mismatch: {0}")]
    RootOrderMismatch(String),
    #[error("vector is not in the zeta eigenspace")]
    NotInZetaSpace,
    #[error("parse error on line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("validation error: {0}")]
    ValidationError(String),
    /// A guaranteed structural identity failed; always a bug.
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable snake_case name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::FieldMismatch => "field_mismatch",
            Error::YBENotSatisfied(_) => "ybe_not_satisfied",
            Error::SingularBraiding => "singular_braiding",
            Error::BadParams(_) => "bad_params",
            Error::DegreeMismatch { .. } => "degree_mismatch",
            Error::DegreeBudgetExceeded { .. } => "degree_budget_exceeded",
            Error::NotACoideal { .. } => "not_a_coideal",
            Error::NotABracket { .. } => "not_a_bracket",
            Error::DomainMismatch(_) => "domain_mismatch",
            Error::NotHecke => "not_hecke",
            Error::IrregularMark(_) => "irregular_mark",
            Error::RootOrderMismatch(_) => "root_order_mismatch",
            Error::NotInZetaSpace => "not_in_zeta_space",
            Error::ParseError { .. } => "parse_error",
            Error::ValidationError(_) => "validation_error",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
