//! Gauss-law-aided error correction for lattice gauge theories at link
//! cutoff 1, on top of the three-qubit phase-flip code.

pub mod circuit;
pub mod codes;
pub mod dense;
pub mod engine;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod pauli;
pub mod qec1d;
pub mod qec2d;
pub mod rng;
pub mod schedule;
pub mod tableau;

pub use error::{QecError, Result};
