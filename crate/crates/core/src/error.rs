use thiserror::Error;

use crate::units::UnitError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Unit(#[from] UnitError),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("momentum transfer q = 0 (forward beam) is not allowed")]
    ForwardBeam,

    #[error("{0} wavefunction has no closed-form treatment; use the quadrature oracle")]
    UnsupportedAnalytic(&'static str),

    #[error("all scattering amplitudes vanish; density matrix cannot be normalized")]
    DegenerateNormalization,

    #[error("density matrix is not positive semidefinite (eigenvalue {0:e})")]
    PositivityViolation(f64),

    #[error("density matrix invariant violated: {0}")]
    InvalidDensityMatrix(String),

    #[error("operation needs a {expected}-beam basis, got {actual} beams")]
    UnsupportedBasis { expected: usize, actual: usize },

    #[error("q·σ₀ = {0} ≥ 1: the probe is already decohered, no decoherence time exists")]
    AlreadyDecohered(f64),

    #[error("quadrature error estimate {estimate:e} exceeds {tolerance:e}; refine the grid")]
    QuadratureAccuracy { estimate: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
