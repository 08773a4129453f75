use alloc::string::String;

use crate::graph::FamilyViolation;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("index {0} listed twice")]
    DuplicateIndex(usize),
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("undefined for empty class")]
    EmptyClass,
    #[error("guard exceeded: {what} is {value}, limit {limit} (use force to override)")]
    GuardExceeded { what: &'static str, value: u64, limit: u64 },
    #[error("work budget of {0} search nodes exhausted")]
    BudgetExhausted(u64),
    #[error("not a partition: {0}")]
    NotAPartition(FamilyViolation),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid gadget: {0}")]
    InvalidGadget(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for the resource-guard family of errors (size guards and work budgets).
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. } | Error::BudgetExhausted(_))
    }
}
