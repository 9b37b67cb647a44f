//! Error type shared by all modules.

use thiserror::Error;

/// Which interferometer arm a computation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathLabel {
    One,
    Two,
}

impl std::fmt::Display for PathLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PathLabel::One => write!(f, "1"),
            PathLabel::Two => write!(f, "2"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("state vector norm defect {defect:e} exceeds tolerance {tol:e}")]
    NotNormalized { defect: f64, tol: f64 },

    #[error("path {path} carries no probability (intensity {intensity:e}); quantity undefined")]
    EmptyPath { path: PathLabel, intensity: f64 },

    #[error("eigenvalue discriminant {value:e} below the clamping window; input is not a density matrix")]
    NumericDomain { value: f64 },

    #[error("channel completeness defect {defect:e} exceeds tolerance {tol:e}")]
    IncompleteChannel { defect: f64, tol: f64 },

    #[error("invalid screen geometry: {0}")]
    InvalidGeometry(String),

    #[error("scan range is empty: {0}")]
    EmptyScan(String),

    #[error("per-step interaction probability {p} outside [0, 0.5]; increase n or reduce gamma*t")]
    StepProbabilityOutOfRange { p: f64 },

    #[error("invalid evolution spec: {0}")]
    InvalidEvolutionSpec(String),

    #[error("malformed state file: {0}")]
    MalformedStateFile(String),

    #[error("state file basis {found:?} does not match [\"H1\", \"H2\", \"V1\", \"V2\"]")]
    BasisMismatch { found: [String; 4] },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Reject values outside [0, 1] (NaN included).
pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            min: 0.0,
            max: 1.0,
        })
    }
}

/// Reject negative or NaN values.
pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            min: 0.0,
            max: f64::INFINITY,
        })
    }
}
