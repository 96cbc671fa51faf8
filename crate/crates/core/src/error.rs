use alloc::string::String;
use core::fmt;

/// Errors reported by the core library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by the zero polynomial.
    DivisionByZero,
    /// Evaluating negative powers at zero.
    ZeroArgument,
    /// A shift index lies outside the admissible range for its level.
    ShiftOutOfRange { level: u32, shift: i64, limit: i64 },
    /// The weight sequence of a scheme is not symmetric.
    AsymmetricLambda,
    /// The weights do not define a quasi-interpolant of the requested order.
    NotQuasiInterpolant(String),
    /// A parameter lies outside the domain of a formula.
    InvalidParameter(String),
    /// A theorem hypothesis is not met for the requested bound.
    HypothesisViolated(String),
    /// Dimensions of two objects do not agree.
    DimensionMismatch { expected: usize, found: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by the zero polynomial"),
            Error::ZeroArgument => write!(f, "negative exponent evaluated at zero"),
            Error::ShiftOutOfRange { level, shift, limit } => write!(
                f,
                "shift {shift} out of range 0..{limit} at level {level}"
            ),
            Error::AsymmetricLambda => write!(f, "weight sequence is not symmetric"),
            Error::NotQuasiInterpolant(msg) => {
                write!(f, "not a quasi-interpolation scheme: {msg}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::HypothesisViolated(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
        }
    }
}

impl core::error::Error for Error {}
