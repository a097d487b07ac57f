//! Exciton transport in the long-range Haken-Strobl-Reineker model.
//!
//! Quantum master equation for the single-exciton correlation matrix, the
//! classical master equation with power-law rates, analytic asymptotics, and
//! the long-jump symmetric exclusion process.

pub mod error;
mod fft;
pub mod model;
pub mod ode;
pub mod quantum;
pub mod specfn;
mod quad;
pub mod analytic;
pub mod classical;
pub mod io;
pub mod linalg;
pub mod manybody;

pub use error::{Error, Result};
pub use model::{Boundary, ModelParams};
