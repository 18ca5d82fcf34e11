//! Weakly accelerated rigid cavities: first-order Bogoliubov coefficients for
//! arbitrary acceleration profiles, mode-mixing and particle-creation
//! resonances, Gaussian-state entanglement under the induced mode-mixing gate,
//! and laboratory-scale parameter estimates.
//!
//! Everything outside [`experiment`] works in natural units `c = hbar = 1`.

pub mod bogoliubov;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod gaussian;
pub mod profiles;
pub mod resonance;
pub mod spectrum;

pub use error::{Error, Result};
