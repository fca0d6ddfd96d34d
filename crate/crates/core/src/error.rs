//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    /// A density-matrix invariant failed; the message names the invariant.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A Fano-Bloch tensor carries entries outside the X sector.
    #[error("tensor is not X-shaped: T[{row}][{col}] = {value:.3e} exceeds tolerance")]
    NotXShaped { row: usize, col: usize, value: f64 },

    #[error("quadrature did not converge: best estimate {best:.12e}, error estimate {err_est:.3e}")]
    QuadratureNoConvergence { best: f64, err_est: f64 },

    #[error("ODE state became non-finite; last valid time t = {t}")]
    OdeNonFinite { t: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The model produced a state violating positivity; for the radiative
    /// closed forms this signals a wrong denominator convention.
    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
