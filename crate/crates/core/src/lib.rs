//! Bond-percolation threshold estimators for undirected graphs.
//!
//! Spectral lower bounds from the adjacency, non-backtracking and high-order
//! non-backtracking matrices, Newman-Ziff Monte Carlo curves, and the
//! path-based message-passing fixed point. Everything here is `no_std` with
//! `alloc`; file IO, the CLI and parallel drivers live in the `percothresh`
//! crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod generators;
pub mod graph;
pub mod nbt;
pub mod paths;
pub mod percolation;
pub mod rng;
pub mod sparse;
pub mod spectral;
pub mod thresholds;

pub use error::{Error, Result};
pub use graph::{
    degree_stats, largest_connected_component, parse_edge_list, triangles_per_edge, DegreeStats, EdgeTriangleCounts,
    Graph, LabeledGraph, NodeId,
};
pub use nbt::{MOperator, NbtMatrix};
pub use paths::{enumerate_paths, DirectedPathSet, DEFAULT_PATH_CAP};
pub use sparse::{LinearOperator, OperatorKind, SparseOperator};
pub use spectral::{SpectralMethod, SpectralResult};
pub use thresholds::{compare, estimate_pc, ErrorReport, EstimateOptions, FastRoute, ThresholdEstimate};
