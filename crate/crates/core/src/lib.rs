//! Moment gaps between standardized statistics and the Gaussian, controlled
//! through cumulants.
//!
//! The crate has three layers:
//!
//! - exact machinery: integer combinatorics with the moment/cumulant
//!   conversions ([`combinatorics`]), growth-envelope gap bounds ([`bounds`]),
//!   polygamma evaluation ([`specfun`]) and closed-form cumulants of
//!   log-determinant and log-volume statistics ([`exact_models`]);
//! - seeded Monte Carlo samplers for the dependency-graph and random-matrix
//!   models ([`simulators`]);
//! - empirical summaries, standardized gaps and decay-rate fits
//!   ([`estimation`]).
//!
//! Everything is deterministic given a seed: samplers draw replicate `i` from
//! substream `(seed, i)` of a counter-based generator, so results do not
//! depend on thread count or execution order.

pub mod bounds;
pub mod combinatorics;
mod dd;
pub mod error;
pub mod estimation;
pub mod exact_models;
pub mod simulators;
pub mod specfun;

pub use error::{Error, Result};

/// Library version, embedded into machine-readable reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
