use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus {0} is not an odd prime in 3..=31")]
    InvalidModulus(u32),

    #[error("level {requested} out of range (available level {available})")]
    LevelOutOfRange { requested: usize, available: usize },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },

    #[error("digit {digit} is not below modulus {q}")]
    DigitOutOfRange { digit: u32, q: u32 },

    #[error("index {index} out of range for a table of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("scalar modes differ (exact vs float)")]
    ModeMismatch,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("decay fit undefined: only {usable_shells} usable shell(s)")]
    FitUndefined { usable_shells: usize },

    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
