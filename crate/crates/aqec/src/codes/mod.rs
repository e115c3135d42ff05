//! Stabilizer codes, their encodings and local-circuit perturbations.

pub mod circuit;
pub mod format;
pub mod gf2;
pub mod pauli;
pub mod space;
pub mod stabilizer;
pub mod zoo;

pub use circuit::{Gate, LocalCircuit};
pub use pauli::Pauli;
pub use space::CodeSpace;
pub use stabilizer::{LogicalPair, StabilizerCode};
