//! Non-Markovian qubit dynamics under colored noise, and identification of
//! the noise spectrum from ensemble-averaged measurement traces.
//!
//! The crate is organised bottom-up:
//!
//! * [`bloch`]: augmented Bloch vectors, commutator/anticommutator
//!   superoperators and matrix functions of `sI - L0`.
//! * [`noise`]: parametric noise correlation functions with analytic
//!   Laplace and Fourier transforms.
//! * [`freq`]: the Laplace-domain response `v(s)`, `gamma(s)` of the
//!   Born-approximation master equation.
//! * [`sim`]: time-domain integration of the memory-kernel master equation
//!   and a Monte Carlo reference for classical Ornstein-Uhlenbeck noise.
//! * [`qubit`]: charge-qubit geometry, frames and closed-form responses.
//! * [`ident`]: discrete Laplace transforms of traces and the inversion
//!   formulas that recover the noise spectrum.
//! * [`pipeline`]: configuration, file formats and the command drivers used
//!   by the `noisespec` binary.
//!
//! Units: times in ps, angular frequencies and energies in rad/ps (hbar = 1).
//! User-facing GHz values are ordinary frequencies, converted with
//! [`units::ghz_to_rad_per_ps`].

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod error;
pub mod freq;
pub mod ident;
pub mod noise;
pub mod pipeline;
pub mod qubit;
pub mod sim;
pub mod special;
pub mod units;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
