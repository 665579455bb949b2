//! Network concentration indices: how much of a weight distribution's
//! potential interaction is realized along the links of a network.
//!
//! The baseline index is `ψ(w, A) = wᵀAw / (1 − HHI(w))`. Its variants differ
//! in the interaction matrix in the numerator or the benchmark in the
//! denominator; see [`indices`] and [`degree_solver`].

pub mod degree_solver;
pub mod error;
pub mod indices;
pub mod io;
pub mod mc;
pub mod measures;
pub mod netbuild;
pub mod netgen;
pub mod report;
pub mod rng;
pub mod stats;
pub mod types;

pub use error::{NciError, Result};
pub use indices::{nci_baseline, nci_density_adjusted, Transformation, Variant};
pub use measures::{density, gini, hhi};
pub use types::{BinaryGraph, DegreeSequence, IndexReport, InteractionMatrix, WeightVector};
