//! Paths of persistence diagrams as features for parameter estimation.
//!
//! The crate covers the whole pipeline: simulating a swarm, computing
//! Vietoris–Rips persistence of each snapshot, turning diagrams into vectors
//! (moments, Betti curves, crocker vectors), comparing paths of vectors with
//! truncated discrete signature kernels, and fitting ε-SVR models on the
//! resulting Gram matrices.

// `!(x > 0.0)` is deliberate: NaN has to fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod features;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod persistence;
pub mod regression;
pub mod rng;
pub mod signature;
pub mod swarm;

pub use error::{Error, Result};
