//! Exact solvers for sigma colorings and lucky labelings, brute-force SAT and MaxCut oracles,
//! certified forcing gadgets, and the hardness reductions built from them.

pub mod error;
pub mod gadgets;
pub mod generate;
pub mod graph;
pub mod labeling;
pub mod reductions;
pub mod sat;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{parse_graph, serialize_graph, Graph, GraphBuilder, VertexSetPartition};
pub use labeling::Labeling;
