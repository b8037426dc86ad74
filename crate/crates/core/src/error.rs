//! Error types shared across the engine.
//!
//! Every failure mode is a value, never a panic: truncation windows that are
//! too narrow, invalid series substitutions, zero divisors in the cyclotomic
//! field, coefficient tables that are too short for the requested weight.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A coefficient outside the exact window of a truncated series was
    /// requested. The caller must recompute with a larger order.
    #[error("coefficient of exponent {exp} lies outside the exact window {window}; enlarge the order")]
    Truncated { exp: i64, window: String },

    /// Substitution g(f(x)) requires f with zero constant term and an
    /// invertible linear coefficient.
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    /// Division by zero in an exact coefficient field.
    #[error("division by zero")]
    DivisionByZero,

    /// A coefficient table does not reach the weight it is applied to.
    #[error("coefficient table of order {order} too short for weight {needed}")]
    TableTooShort { order: usize, needed: i64 },

    /// Tensor slot index outside 1..=k.
    #[error("tensor slot {slot} out of range 1..={k}")]
    SlotOutOfRange { slot: usize, k: usize },

    /// An operation that requires a homogeneous vector received a mixed one.
    #[error("expected a homogeneous vector, got components of weights {0:?}")]
    NotHomogeneous(Vec<i64>),
}

pub type Result<T> = std::result::Result<T, Error>;
