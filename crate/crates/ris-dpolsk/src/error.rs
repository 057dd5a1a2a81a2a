//! Crate-wide error type and the process exit-code contract.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong, from malformed configs to quadrature
/// breakdown. Variants are grouped by the exit code they map to: anything
/// numerical exits with 2, anything usage- or validation-shaped with 1.
#[derive(Debug, Error)]
pub enum Error {
    /// An input field failed validation; always names the offending field.
    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },

    /// The config file could not be parsed at all.
    #[error("config parse error: {0}")]
    Parse(String),

    /// Positions coincide or a link collapses to zero length.
    #[error("degenerate geometry: {reason}")]
    DegenerateGeometry { reason: String },

    /// A phase configuration's unit count does not match the surface.
    #[error("phase configuration covers {got} units but the surface has {expected}")]
    ConfigSizeMismatch { expected: usize, got: usize },

    /// A function argument fell outside its mathematical domain.
    #[error("domain error: {what}")]
    Domain { what: String },

    /// Adaptive quadrature could not reach the requested tolerance. Carries
    /// the best estimate and its error bound so the failure is diagnosable;
    /// the estimate is never returned as a silently wrong value.
    #[error(
        "quadrature failed to converge: estimate {estimate:.6e}, error bound {error_bound:.6e}, \
         requested rel {rel_tol:.1e} / abs {abs_tol:.1e}, {subdivisions} subdivisions"
    )]
    Convergence {
        estimate: f64,
        error_bound: f64,
        rel_tol: f64,
        abs_tol: f64,
        subdivisions: usize,
    },

    /// A requested sweep area rounds to zero reflecting units.
    #[error("area {area_m2} m^2 rounds to zero units (one unit is {unit_area_m2} m^2)")]
    AreaTooSmall { area_m2: f64, unit_area_m2: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable exit-code contract for scripting: 1 for usage/validation
    /// failures, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Convergence { .. } | Error::Domain { .. } => 2,
            _ => 1,
        }
    }

    /// Shorthand for a [`Error::Validation`] with a static field name.
    pub fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
