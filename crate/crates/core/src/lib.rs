//! Quantum correlations of two-qubit X states under decoherence.
//!
//! This crate computes three correlation quantifiers for two-qubit X states
//! (local quantum uncertainty, trace-distance discord, Wootters concurrence)
//! from closed forms, and evolves them under two exactly solvable
//! open-system models:
//!
//! * [`dephasing`]: two qubits in independent bosonic reservoirs with
//!   Ohmic-like spectral densities `J(w) = λ Ω^{1-s} w^s e^{-w/Ω}`, where the
//!   coherences decay through the dephasing function `γ(t)`;
//! * [`radiative`]: two 2-level atoms coupled to a common radiation field,
//!   starting from `|e₁e₂⟩`, with collective damping `Γ₁₂` and dipole-dipole
//!   shift `Ω₁₂`.
//!
//! Every closed form ships with an independent verifier in [`oracles`]
//! (definition-level minimizations, quadrature of the dephasing integral,
//! Runge-Kutta integration of the master equation). The [`analysis`] module
//! extracts freezing intervals, sudden-change points and birth/death/revival
//! events from sampled trajectories.

#![forbid(unsafe_code)]

pub mod analysis;
pub mod dephasing;
pub mod error;
pub mod measures;
pub mod numerics;
pub mod oracles;
pub mod radiative;
pub mod states;

pub use error::{Error, Result};
pub use measures::MeasureSet;
pub use states::XState;
