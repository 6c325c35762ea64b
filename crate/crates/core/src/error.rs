//! Error type shared across the library.

use thiserror::Error;

/// Unified error for domain violations, capacity guards, and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Arguments outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Plane order with no supported finite field.
    #[error("unsupported plane order {0} (supported orders: 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedOrder(usize),
    /// Estimated work exceeds an enumeration capacity guard.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Parameters outside the regime where a bound applies.
    #[error("regime error: {0}")]
    Regime(String),
    /// A structural precondition on the input does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Malformed text encoding or configuration input.
    #[error("parse error: {0}")]
    Parse(String),
}
