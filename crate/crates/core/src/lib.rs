//! Exact solver for the maximum k-defective clique problem.
//!
//! A k-defective clique is a vertex set whose induced subgraph misses at most
//! `k` edges. The solver combines a coloring-based upper bound with
//! degree-based bounds, preprocessing rules that delete vertices and edges
//! which cannot belong to an improving solution, and binary branch-and-bound.

pub mod bitset;
pub mod bound;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod reduce;
pub mod report;
pub mod search;

pub use bitset::BitSet;
pub use graph::{Graph, GraphError, GraphOptions, Vertex};
pub use search::{solve, SolveResult, SolveStatus, SolverConfig};
