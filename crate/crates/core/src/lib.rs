//! Defensive alliances with forbidden, necessary and complementary-pair
//! constraints, the reduction chain from Minimum Maximum Outdegree, and
//! the tree decomposition transformations that go with it.

pub mod alliance;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod mmo;
pub mod pipeline;
pub mod reductions;
pub mod samples;
pub mod solver;
pub mod treewidth;
pub mod vertex;

pub use alliance::{AllianceInstance, Mode, Variant, Verdict};
pub use error::{Error, Result};
pub use graph::{Edge, Graph, UnorderedPair, VertexSet};
pub use mmo::{MmoInstance, Orientation};
pub use reductions::{ReductionStage, SizeFn, StageTag};
pub use solver::{solve, Answer, Goal, SolveReport, SolveRequest};
pub use treewidth::{NiceTreeDecomposition, TreeDecomposition};
pub use vertex::{Role, VertexId};
