//! Exact and certified computations around the counterexamples that separate
//! Riemann from Lebesgue integration on `[0, 1]`.

pub mod error;
pub mod exact;
pub mod counterexamples;
pub mod functions;
pub mod darboux;
pub mod convergence;
pub mod fourier;
pub mod report;
mod par;

pub use error::{Error, Result};
