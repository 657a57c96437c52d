//! Fidelity balloons and quantum resources for qubit and Gaussian states.
//!
//! The crate computes Uhlmann fidelities, entanglement, discord and photon
//! statistics for a handful of state families, scans parameter boxes for
//! the set of states close to a target, and reports which resource classes
//! that set contains.

pub mod error;
pub mod figures;
pub mod gaussian_single;
pub mod gaussian_two;
pub mod matrix;
pub mod qubit;
pub mod report;
pub mod scan;
pub mod selftest;

pub use error::{Error, Result};
