//! Numerical laboratory for threshold phenomena in the one-dimensional
//! reaction-diffusion Cauchy problem
//!
//! ```text
//! u_t = u_xx + f(u),   u(x, 0) = φ(x) ≥ 0,   φ symmetric decreasing
//! ```
//!
//! The crate is `no_std` and needs only `alloc`. It provides:
//!
//! - [`nonlin`]: bistable, ignition and monostable reaction terms with
//!   potentials, distinguished roots and structural validators.
//! - [`field`]: symmetric-decreasing profiles on a half-line grid, plus a
//!   full-line variant for moving-frame work.
//! - [`evolve`]: IMEX time stepping in the lab frame and in a moving frame.
//! - [`energy`]: the energy `E`, the weighted functional `Φ_c`, dissipation
//!   bookkeeping, the wave-like test and the Hölder-constant estimate.
//! - [`stationary`]: the bump, the traveling front and the spectral check.
//! - [`classify`]: long-time verdicts with energy and profile evidence.
//! - [`threshold`]: monotone data families and the sharp-threshold search.
//!
//! IO, configuration and the command line live in the `rdlab` crate.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is how parameters reject NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classify;
pub mod energy;
mod error;
pub mod evolve;
pub mod field;
pub mod linalg;
pub mod math;
pub mod nonlin;
pub mod quad;
pub mod roots;
pub mod stationary;
pub mod threshold;

pub use error::{Error, Result};
