//! Self-contained numeric kernels: small Hermitian eigensolvers, the PSD
//! matrix square root, trace norm, adaptive quadrature on the half line,
//! fixed-step Runge-Kutta integration, series summation and log-gamma.
//!
//! All operations are pure; nothing here holds mutable state.

pub mod eig;
pub mod matrix;
pub mod ode;
pub mod quad;
pub mod series;
pub mod special;

pub use eig::{eig_hermitian, sqrt_psd, trace_norm, EigenDecomposition, PSD_CLAMP};
pub use matrix::{pauli, pauli_tensor, CMatrix, HermitianMatrix};
pub use ode::{ode_rk4, OdeTrajectory};
pub use quad::integrate_semiinfinite;
pub use series::{sum_series, SeriesSum, DEFAULT_M_MAX, DEFAULT_REL_TOL};
pub use special::{gamma, ln_gamma, ln_gamma_complex};
