//! Downlink coverage probability and area spectral efficiency of dense
//! small-cell networks with a LOS/NLOS path loss model and Gamma-family
//! (Rayleigh, Nakagami-m, Rician-via-Nakagami) fading.
//!
//! The analytical engine ([`coverage`]) evaluates the coverage probability
//! through the displaced-process intensity measures ([`intensity`]) and an
//! inversion of the conditional characteristic function of 1/SINR. The
//! Monte Carlo simulator ([`sim`]) is an independent oracle for it.

pub mod ase;
pub mod config;
pub mod coverage;
pub mod error;
pub mod fading;
pub mod intensity;
pub mod model;
pub mod quad;
pub mod sim;
pub mod special;
pub mod units;

pub use error::{Error, Result};
pub use fading::FadingModel;
pub use model::{LinkType, NetworkConfig};
