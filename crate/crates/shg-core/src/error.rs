//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by parameter validation, solvers and spectrum evaluation.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical parameter or argument is outside its domain.
    #[error("parameter: {0}")]
    Parameter(String),

    /// Drive phases violate the in-phase fixed-point constraint
    /// varphi = 2*phi + pi (mod 2pi).
    #[error("phase: varphi = {got:.17e} differs from 2*phi + pi = {expected:.17e} by {deviation:.3e} rad (mod 2pi)")]
    Phase {
        got: f64,
        expected: f64,
        deviation: f64,
    },

    /// The operating point is at or beyond the instability threshold
    /// eta_in = 1 + m; linearized spectra diverge there.
    #[error("instability: eta_in = {eta_in:.6} >= 1 + m = {threshold:.6}")]
    Unstable { eta_in: f64, threshold: f64 },

    /// A steady state does not solve the fixed-point equation for the
    /// supplied drive (stale or hand-edited inputs).
    #[error(
        "inconsistency: fixed-point residual {residual:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    Inconsistent { residual: f64, tolerance: f64 },

    /// The root finder hit its iteration cap. Unreachable for valid inputs:
    /// the fixed-point cubic is strictly monotone on the bracket.
    #[error("convergence: root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// A value is outside the mathematical domain of an operation
    /// (e.g. a non-positive spectrum handed to a dB conversion).
    #[error("domain: {0}")]
    Domain(String),

    /// Malformed table data (emission or parsing).
    #[error("format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable category, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Phase { .. } => "phase",
            Error::Unstable { .. } => "instability",
            Error::Inconsistent { .. } => "inconsistency",
            Error::NoConvergence { .. } => "convergence",
            Error::Domain(_) => "domain",
            Error::Format(_) => "format",
        }
    }
}
