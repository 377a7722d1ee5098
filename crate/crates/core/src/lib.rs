//! Algorithms for edge-deletion interdiction of bootstrap percolation.
//!
//! The crate provides an immutable graph type, a deterministic percolation
//! engine with heterogeneous thresholds, seeded random graph generators,
//! tree-decomposition machinery (validation, heuristics, exact small solver,
//! nice-form conversion, local treewidth sampling), an exact dynamic program
//! for generalized influence diffusion minimization over nice decompositions,
//! and the two edge-deletion problems built on top of it: minimizing
//! contagion and stopping contagion.

pub mod contagion;
pub mod decomposition;
pub mod gidm;
pub mod graph;
pub mod models;
pub mod percolation;
pub mod seeds;

pub use contagion::{
    ContagionError, DeletionSolution, MinContagionInstance, StopContagionInstance,
};
pub use decomposition::{NiceDecomposition, TreeDecomposition};
pub use gidm::{GidmError, GidmInstance};
pub use graph::{Graph, GraphError, SubgraphMap, VertexSet};
pub use percolation::{PercolationError, PercolationTrace, Threshold, ThresholdMap};
