//! Error types shared across the engine.

use alloc::string::String;
use core::fmt;

use crate::scalar::RingKind;

/// Errors raised by scalar and exterior-algebra arithmetic.
#[derive(Clone, PartialEq, Debug)]
pub enum AlgebraError {
    DivisionByZero,
    RingMismatch { left: RingKind, right: RingKind },
    NotInvertibleRing,
    DimensionMismatch { left: u8, right: u8 },
    Parse(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::DivisionByZero => write!(f, "division by zero"),
            AlgebraError::RingMismatch { left, right } => {
                write!(f, "coefficient ring mismatch: {left} vs {right}")
            }
            AlgebraError::NotInvertibleRing => {
                write!(f, "inversion is defined for rational and float scalars only")
            }
            AlgebraError::DimensionMismatch { left, right } => {
                write!(f, "complex dimension mismatch: {left} vs {right}")
            }
            AlgebraError::Parse(s) => write!(f, "parse error: {s:?}"),
        }
    }
}

/// Errors raised by model and metric level operations.
#[derive(Clone, PartialEq, Debug)]
pub enum EngineError {
    Algebra(AlgebraError),
    ModelMismatch(String),
    MetricMismatch(String),
    DegreeError(String),
    RangeError(String),
    ZeroH,
    NotBalanced(String),
    MetricFlagViolation(String),
    NotDegenerateBalanced(String),
    ClosednessViolation(String),
    NotPrimitiveClass(String),
    DegenerateClass(String),
    NonRealClass(String),
    SupportOverflow(String),
    Config(String),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Algebra(e) => write!(f, "{e}"),
            EngineError::ModelMismatch(s) => write!(f, "model mismatch: {s}"),
            EngineError::MetricMismatch(s) => write!(f, "metric mismatch: {s}"),
            EngineError::DegreeError(s) => write!(f, "degree error: {s}"),
            EngineError::RangeError(s) => write!(f, "range error: {s}"),
            EngineError::ZeroH => write!(f, "twist parameter h must be nonzero"),
            EngineError::NotBalanced(s) => write!(f, "metric is not balanced: {s}"),
            EngineError::MetricFlagViolation(s) => write!(f, "metric flag violation: {s}"),
            EngineError::NotDegenerateBalanced(s) => {
                write!(f, "metric is not degenerate balanced: {s}")
            }
            EngineError::ClosednessViolation(s) => write!(f, "closedness violation: {s}"),
            EngineError::NotPrimitiveClass(s) => write!(f, "class is not primitive: {s}"),
            EngineError::DegenerateClass(s) => write!(f, "degenerate class: {s}"),
            EngineError::NonRealClass(s) => write!(f, "class is not real: {s}"),
            EngineError::SupportOverflow(s) => write!(f, "frequency support overflow: {s}"),
            EngineError::Config(s) => write!(f, "configuration error: {s}"),
        }
    }
}

impl From<AlgebraError> for EngineError {
    fn from(e: AlgebraError) -> Self {
        EngineError::Algebra(e)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AlgebraError {}

#[cfg(feature = "std")]
impl std::error::Error for EngineError {}
