//! Fourier analysis on `F_q^d` and truncated `F_q^infinity`, regularity
//! diagnostics for measures, and exact three-term progression counting.

pub mod ap;
pub mod arith;
pub mod error;
pub mod measures;
pub mod rng;
pub mod spectral;
pub mod subspace;

pub use error::{Error, Result};
