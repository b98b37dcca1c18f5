use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("argument outside the domain of {function}: {reason}")]
    Domain { function: &'static str, reason: String },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("potential has no double well (found {minima} minima)")]
    NotDoubleWell { minima: usize },

    #[error("wells are not symmetric enough to use a single circulating current: asymmetry ratio {ratio:e} exceeds {tolerance:e}")]
    SymmetryViolation { ratio: f64, tolerance: f64 },

    #[error("field point lies inside the wire (distance {distance:e} m < wire radius {wire_radius:e} m)")]
    InsideWire { distance: f64, wire_radius: f64 },

    #[error("ramp schedule never reaches resonance (peak window value {peak})")]
    NeverResonant { peak: f64 },

    #[error("integration step underflow: step {step:e} s over span {span:e} s")]
    StepUnderflow { step: f64, span: f64 },

    #[error("norm drift {drift:e} exceeds tolerance {tolerance:e} at t = {time:e} s")]
    NormDrift {
        drift: f64,
        tolerance: f64,
        time: f64,
    },

    #[error("missing measurement record for axis {0}")]
    MissingRecord(char),

    #[error("{0}")]
    Unsupported(String),
}

/// Coarse classification used by front ends to map failures to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Parameter,
    Numerical,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidParameter { .. } | Error::MissingRecord(_) | Error::Unsupported(_) => {
                ErrorCategory::Parameter
            }
            _ => ErrorCategory::Numerical,
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
