use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("price at index {index} is not strictly positive ({value})")]
    NonPositivePrice { index: usize, value: f64 },

    #[error("{what}: length {len} is below the required minimum {min}")]
    TooShort {
        what: &'static str,
        len: usize,
        min: usize,
    },

    #[error("row {row} has zero sample variance")]
    DegenerateSeries { row: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("sample contains NaN at position {0}")]
    NanInSample(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("singularity: argument {at} coincides with a pole")]
    Singularity { at: Complex64 },

    #[error("branch selection failed at z = {z}: {detail}; roots = {roots:?}")]
    BranchSelection {
        z: Complex64,
        roots: Vec<Complex64>,
        detail: String,
    },

    #[error("root finder did not converge after {iterations} iterations (degree {degree})")]
    RootFinding { iterations: usize, degree: usize },

    #[error("eigensolver did not converge after {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("density mass {mass} deviates from 1 by more than {tolerance}")]
    DensityMass { mass: f64, tolerance: f64 },
}

impl Error {
    /// Failures of a numerical procedure, as opposed to rejected inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singularity { .. }
                | Error::BranchSelection { .. }
                | Error::RootFinding { .. }
                | Error::EigenNoConvergence { .. }
                | Error::DensityMass { .. }
        )
    }
}

pub(crate) fn check_param(
    name: &'static str,
    value: f64,
    ok: bool,
    reason: &'static str,
) -> Result<()> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
