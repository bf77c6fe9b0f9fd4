//! Single-photon transmission through arrays of imperfect beam splitters.
//!
//! The crate covers four views of the same experiment:
//!
//! - [`array`]: analytic transmission of the ideal array and Monte Carlo
//!   ensembles over normally dispersed splitting angles;
//! - [`thermal`]: exact truncated-Fock propagation when thermal states enter
//!   the auxiliary ports, next to the geometric-decay approximation;
//! - [`mcwf`]: quantum-jump trajectory simulation of absorption and
//!   reflection losses;
//! - [`optimize`]: the critical number of splitters that maximizes
//!   transmission once each splitter also absorbs.
//!
//! [`fock`] supplies the shared state machinery, [`stats`] the mergeable
//! ensemble accumulators. All simulations draw from per-sample RNG streams
//! ([`rng`]) so that fixed-seed runs are bit-identical regardless of the
//! [`exec::Parallelism`] policy; the `parallel` feature (on by default) backs
//! the ensemble loops with rayon.

pub mod array;
pub mod error;
pub mod exec;
pub mod fock;
pub mod mcwf;
pub mod optimize;
pub mod rng;
pub mod stats;
pub mod thermal;

pub use error::{Error, Result};
pub use exec::Parallelism;
