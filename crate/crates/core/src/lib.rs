//! Steady-state entanglement of a driven cavity–magnon–phonon system.
//!
//! The crate follows the linearized Gaussian treatment: a classical operating
//! point sets the enhanced magnomechanical coupling, the quadrature
//! fluctuations obey `Ṁ = A M + N`, the steady-state covariance solves
//! `Aσ + σAᵀ = -D`, and bipartite logarithmic negativities are read off the
//! two-mode blocks of σ.
//!
//! Modules, bottom up:
//!
//! - [`model`]: parameters, units, bath occupancies, drive rate
//! - [`classical`]: classical amplitudes and bistability
//! - [`dynamics`]: drift and diffusion matrices, stability, covariance ODE
//! - [`lyapunov`]: steady-state covariance
//! - [`entanglement`]: logarithmic negativity, transfer, Bogoliubov modes
//! - [`checks`]: self-test suite behind `magnomech check`
//! - [`pipeline`], [`sweep`], [`figures`], [`config`], [`output`]: the sweep harness

// Guards like `!(x > 0.0)` are written that way on purpose so NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod classical;
pub mod config;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod figures;
pub mod lyapunov;
pub mod model;
pub mod output;
pub mod pipeline;
pub mod sweep;

pub use error::{Error, Result};
