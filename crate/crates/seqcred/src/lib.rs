//! Simulation laboratory for Bayesian credible balls in the Gaussian
//! sequence model `Y_k = theta_k + g_k / sqrt(n)`.
//!
//! The library covers the full pipeline:
//!
//! * [`sequence_model`]: truncated sequence-space signals and noisy
//!   observations, with a deterministic noise-injection channel.
//! * [`conjugate_posterior`]: diagonal Gaussian priors, closed-form
//!   posteriors, posterior sampling, and marginal-likelihood selection of
//!   the prior regularity.
//! * [`norms`]: `l2`, Sobolev, weighted-ellipsoid, and multiscale
//!   sup-norm distances, with weight-sequence validity checks.
//! * [`credible_sets`]: Monte Carlo radius calibration, blow-up factors,
//!   membership tests, and the white-noise discrepancy diagnostic.
//! * [`signal_classes`]: decision procedures for self-similarity,
//!   polished-tail, and relaxed self-similarity conditions.
//! * [`experiments`]: a replicated, seed-stable experiment harness with
//!   JSON configs and CSV/JSON outputs, exposed through the `seqcred` binary.
//!
//! Every stochastic routine takes an explicit random source or seed, and the
//! experiment harness derives one independent stream per replication, so any
//! run is reproducible bit for bit at any thread count.
//!
//! Start with the runnable examples (`cargo run --release --example ...`):
//! each major capability has one.

pub mod conjugate_posterior;
pub mod credible_sets;
pub mod experiments;
pub mod norms;
pub mod seeding;
pub mod sequence_model;
pub mod signal_classes;

use thiserror::Error;

/// Errors from the core model, norm, and calibration routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Two sequence-shaped inputs had incompatible lengths or index modes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A file could not be read or written.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// A serialized signal, weight list, or config could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn mismatch(msg: impl Into<String>) -> Error {
    Error::DimensionMismatch(msg.into())
}
