//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation
    /// (zero base with negative exponents, nonpositive norm base, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition does not hold (nonunit constant term, degenerate
    /// label scheme, reducible variety where irreducibility is required, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The divisor has no Witt inverse inside the integer group ring.
    #[error("not Witt-invertible: {0}")]
    NonInvertible(String),

    /// A truncated operand does not carry enough exact coefficients for the
    /// requested computation.
    #[error("truncation horizon exceeded: {0}")]
    Truncation(String),

    /// A Witt sum or product does not converge (e.g. a zeta special value at
    /// or below the dimension).
    #[error("divergent: {0}")]
    Divergence(String),

    /// Exact-arithmetic consistency failure. Denominators that should cancel
    /// did not, or an internal bound was violated; always a bug, never data.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    /// Malformed textual input (variety, pattern, label or lambda grammar).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
