//! Graph algorithms with low average sensitivity, and a harness that
//! measures how much an algorithm's output moves when a random edge is
//! deleted.

pub mod coloring;
pub mod error;
pub mod graph;
pub mod harness;
pub mod local_oracle;
pub mod matching;
pub mod metrics;
pub mod mincut;
pub mod mst;
pub mod stochastics;
pub mod vertexcover;

pub use error::{Error, Result};
pub use graph::{edge, generate, parse_edge_list, EdgeId, Family, Graph, VertexId};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/graphs.md")]
    pub struct Graphs;
    #[doc = include_str!("../../../book/src/sensitivity.md")]
    pub struct Sensitivity;
    #[doc = include_str!("../../../book/src/spanning-forests.md")]
    pub struct SpanningForests;
    #[doc = include_str!("../../../book/src/min-cut.md")]
    pub struct MinCut;
    #[doc = include_str!("../../../book/src/matching.md")]
    pub struct Matching;
    #[doc = include_str!("../../../book/src/local-oracle.md")]
    pub struct LocalOracle;
    #[doc = include_str!("../../../book/src/cover-and-coloring.md")]
    pub struct CoverAndColoring;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct CommandLine;
}
