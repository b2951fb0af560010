//! Small hand-checked instances used by tests, the acceptance suite and the
//! CLI documentation.

use crate::alliance::{AllianceInstance, Mode};
use crate::graph::{Graph, UnorderedPair, VertexSet};
use crate::mmo::MmoInstance;
use crate::treewidth::TreeDecomposition;
use crate::vertex::VertexId;

fn v(s: &str) -> VertexId {
    VertexId::named(s)
}

fn set(xs: &[&str]) -> VertexSet {
    xs.iter().map(|x| v(x)).collect()
}

fn graph(edges: &[(&str, &str)]) -> Graph {
    Graph::from_edges([], edges.iter().map(|(a, b)| (v(a), v(b)))).expect("sample edges are valid")
}

/// Five vertices a..e. {a,b} is a smallest defensive alliance; {a,d} is not.
pub fn five_vertex_graph() -> Graph {
    graph(&[("a", "b"), ("c", "a"), ("a", "d"), ("d", "b"), ("b", "e"), ("c", "d"), ("d", "e"), ("c", "e")])
}

/// Seven vertices with forbidden {d,f}, necessary {a,g} and the pair (b,c).
/// For k=3 the only solution is {a,b,g}.
pub fn seven_vertex_instance(k: usize) -> AllianceInstance {
    let g = graph(&[("a", "b"), ("b", "e"), ("e", "a"), ("d", "e"), ("e", "f"), ("e", "c"), ("c", "g")]);
    let pairs = [UnorderedPair::new(v("b"), v("c")).expect("distinct")].into();
    AllianceInstance::new(g, k, set(&["d", "f"]), set(&["a", "g"]), pairs, Mode::AtMost).expect("valid sample")
}

/// One edge a-b of weight 3.
pub fn heavy_edge_mmo(r: u64) -> MmoInstance {
    MmoInstance::from_weighted_edges([], [(v("a"), v("b"), 3)], r).expect("valid sample")
}

/// Square a-b-c-d with chord a-c; treewidth 2.
pub fn diamond_graph() -> Graph {
    graph(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "c")])
}

/// Nice decomposition of [`diamond_graph`] with a join at {a,c}; the left
/// branch introduces b, the right one d.
pub fn diamond_nice_td() -> TreeDecomposition {
    let bags: Vec<VertexSet> = [
        &[][..],
        &["a"],
        &["a", "c"],
        &["a", "c"],
        &["a", "b", "c"],
        &["a", "b"],
        &["a"],
        &[],
        &["a", "c"],
        &["a", "c", "d"],
        &["c", "d"],
        &["d"],
        &[],
    ]
    .map(set)
    .to_vec();
    let parent = vec![None, Some(0), Some(1), Some(2), Some(3), Some(4), Some(5), Some(6), Some(2), Some(8), Some(9), Some(10), Some(11)];
    TreeDecomposition::from_parents(bags, parent).expect("valid sample")
}
