//! Entangled vs. disentangled EPR photon pairs in coincidence experiments.
//!
//! Two source models are implemented side by side: the singlet Bell pair,
//! and an ensemble of product states sharing a random quantization axis with
//! random per-photon phases. For each of the double-coincidence (Aspect
//! type) and triple-coincidence teleportation experiments (Gisin, Zeilinger,
//! Kim types) the crate provides closed-form predictions, a direct Born-rule
//! evaluation of the entangled case, and a seeded, parallel Monte Carlo.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod analytics;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod mc_engine;
pub mod optics;
pub mod qcore;
pub mod sources;

pub use error::{Error, Result};
