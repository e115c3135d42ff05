//! Numerical workbench for approximate error correction on qubit lattices.

pub mod cleaning;
pub mod codes;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod linalg;

pub use error::{Error, Result};
