use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex::VertexId;

pub type VertexSet = BTreeSet<VertexId>;

/// Two distinct vertices, stored smaller first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(VertexId, VertexId)", into = "(VertexId, VertexId)")]
pub struct UnorderedPair(VertexId, VertexId);

pub type Edge = UnorderedPair;

impl UnorderedPair {
    pub fn new(a: VertexId, b: VertexId) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(UnorderedPair(a, b)),
            std::cmp::Ordering::Greater => Ok(UnorderedPair(b, a)),
            std::cmp::Ordering::Equal => Err(Error::SelfLoop(a)),
        }
    }

    pub fn first(&self) -> &VertexId {
        &self.0
    }

    pub fn second(&self) -> &VertexId {
        &self.1
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        &self.0 == v || &self.1 == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(&self, v: &VertexId) -> Option<&VertexId> {
        if &self.0 == v {
            Some(&self.1)
        } else if &self.1 == v {
            Some(&self.0)
        } else {
            None
        }
    }
}

impl TryFrom<(VertexId, VertexId)> for UnorderedPair {
    type Error = Error;

    fn try_from((a, b): (VertexId, VertexId)) -> Result<Self> {
        UnorderedPair::new(a, b)
    }
}

impl From<UnorderedPair> for (VertexId, VertexId) {
    fn from(p: UnorderedPair) -> Self {
        (p.0, p.1)
    }
}

/// Undirected simple graph with sorted adjacency sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, VertexSet>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Returns false if the vertex was already present.
    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, VertexSet::new());
        true
    }

    /// Adds the edge and any missing endpoint. Returns false for a duplicate.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.add_vertex(u.clone());
        self.add_vertex(v.clone());
        let fresh = self.adj.get_mut(&u).unwrap().insert(v.clone());
        if fresh {
            self.adj.get_mut(&v).unwrap().insert(u);
            self.edge_count += 1;
        }
        Ok(fresh)
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.adj.contains_key(v)
    }

    pub fn has_edge(&self, u: &VertexId, v: &VertexId) -> bool {
        self.adj.get(u).is_some_and(|n| n.contains(v))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.adj.keys()
    }

    /// Edges in canonical order, each reported once.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().flat_map(|(u, ns)| {
            ns.range(u..)
                .filter(move |v| *v != u)
                .map(move |v| UnorderedPair(u.clone(), v.clone()))
        })
    }

    pub fn neighbors(&self, v: &VertexId) -> Result<&VertexSet> {
        self.adj.get(v).ok_or_else(|| Error::UnknownVertex(v.clone()))
    }

    pub fn degree(&self, v: &VertexId) -> Result<usize> {
        self.neighbors(v).map(|n| n.len())
    }

    pub fn open_neighborhood(&self, v: &VertexId) -> Result<VertexSet> {
        self.neighbors(v).cloned()
    }

    /// N[v] = N(v) ∪ {v}.
    pub fn closed_neighborhood(&self, v: &VertexId) -> Result<VertexSet> {
        let mut n = self.open_neighborhood(v)?;
        n.insert(v.clone());
        Ok(n)
    }

    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components_within(|_| true)
    }

    /// Components of the subgraph induced by `set`; vertices outside the graph
    /// are ignored.
    pub fn induced_components(&self, set: &VertexSet) -> Vec<VertexSet> {
        self.components_within(|v| set.contains(v))
    }

    fn components_within(&self, keep: impl Fn(&VertexId) -> bool) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for start in self.adj.keys() {
            if !keep(start) || seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start.clone());
            while let Some(u) = queue.pop_front() {
                comp.insert(u.clone());
                for w in &self.adj[u] {
                    if keep(w) && seen.insert(w.clone()) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn induced_subgraph(&self, set: &VertexSet) -> Graph {
        let mut g = Graph::new();
        for v in set.iter().filter(|v| self.contains(v)) {
            g.add_vertex(v.clone());
            for w in self.adj[v].range(v..).filter(|w| set.contains(*w) && *w != v) {
                g.add_edge(v.clone(), w.clone()).expect("distinct endpoints");
            }
        }
        g
    }

    /// Graphviz rendering, one statement per vertex and per edge.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph \"{name}\" {{\n");
        for v in self.vertices() {
            writeln!(s, "  \"{v}\";").unwrap();
        }
        for e in self.edges() {
            writeln!(s, "  \"{}\" -- \"{}\";", e.first(), e.second()).unwrap();
        }
        s.push_str("}\n");
        s
    }

    /// Parses `u v` lines; `#` starts a comment and a lone token declares an
    /// isolated vertex.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut g = Graph::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let parse = |t: &str| t.parse::<VertexId>().map_err(|e| err(e.to_string()));
            match tokens.as_slice() {
                [v] => {
                    g.add_vertex(parse(v)?);
                }
                [u, v] => {
                    g.add_edge(parse(u)?, parse(v)?).map_err(|e| err(e.to_string()))?;
                }
                _ => return Err(err(format!("expected `u v`, found {} tokens", tokens.len()))),
            }
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for v in self.vertices().filter(|v| self.adj[*v].is_empty()) {
            writeln!(s, "{v}").unwrap();
        }
        for e in self.edges() {
            writeln!(s, "{} {}", e.first(), e.second()).unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(s: &str) -> VertexId {
        VertexId::named(s)
    }

    fn set(names: &[&str]) -> VertexSet {
        names.iter().map(|s| v(s)).collect()
    }

    pub(crate) fn five_vertex_graph() -> Graph {
        let edges = [("a", "b"), ("c", "a"), ("a", "d"), ("d", "b"), ("b", "e"), ("c", "d"), ("d", "e"), ("c", "e")];
        Graph::from_edges([], edges.iter().map(|(x, y)| (v(x), v(y)))).unwrap()
    }

    #[test]
    fn closed_neighborhoods_on_five_vertex_graph() {
        let g = five_vertex_graph();
        assert_eq!(g.closed_neighborhood(&v("d")).unwrap(), set(&["a", "b", "c", "d", "e"]));
        assert_eq!(g.closed_neighborhood(&v("a")).unwrap(), set(&["a", "b", "c", "d"]));
        assert_eq!(g.open_neighborhood(&v("a")).unwrap(), set(&["b", "c", "d"]));
    }

    #[test]
    fn isolated_vertex_neighborhood_is_itself() {
        let mut g = Graph::new();
        g.add_vertex(v("x"));
        assert_eq!(g.closed_neighborhood(&v("x")).unwrap(), set(&["x"]));
    }

    #[test]
    fn unknown_vertex_is_named_in_error() {
        let err = five_vertex_graph().closed_neighborhood(&v("z")).unwrap_err();
        assert!(err.to_string().contains("`z`"));
    }

    #[test]
    fn rejects_self_loops_and_collapses_parallel_edges() {
        let mut g = Graph::new();
        assert!(g.add_edge(v("a"), v("a")).is_err());
        assert!(g.add_edge(v("a"), v("b")).unwrap());
        assert!(!g.add_edge(v("b"), v("a")).unwrap());
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn components() {
        assert_eq!(five_vertex_graph().connected_components().len(), 1);
        assert_eq!(five_vertex_graph().connected_components()[0].len(), 5);
        let g = Graph::from_edges([v("a"), v("b")], []).unwrap();
        assert_eq!(g.connected_components(), vec![set(&["a"]), set(&["b"])]);
        assert!(Graph::new().connected_components().is_empty());
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = five_vertex_graph();
        let text = g.to_edge_list();
        assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
        let parsed = Graph::parse_edge_list("# comment\na b\n\nc\n").unwrap();
        assert_eq!(parsed.vertex_count(), 3);
        let err = Graph::parse_edge_list("a b\na b c\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = Graph::parse_edge_list("a a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn dot_lists_every_edge() {
        let dot = five_vertex_graph().to_dot("sample");
        assert_eq!(dot.matches(" -- ").count(), 8);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..9).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..20).prop_map(move |pairs| {
                let mut g = Graph::new();
                for i in 0..n {
                    g.add_vertex(VertexId::named(format!("v{i}")));
                }
                for (a, b) in pairs {
                    if a != b {
                        g.add_edge(VertexId::named(format!("v{a}")), VertexId::named(format!("v{b}"))).unwrap();
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn neighborhood_symmetry(g in arb_graph()) {
            for u in g.vertices() {
                let closed = g.closed_neighborhood(u).unwrap();
                prop_assert!(closed.contains(u));
                let mut open = closed.clone();
                open.remove(u);
                prop_assert_eq!(&open, g.neighbors(u).unwrap());
                for w in g.neighbors(u).unwrap() {
                    prop_assert!(g.neighbors(w).unwrap().contains(u));
                }
            }
        }

        #[test]
        fn components_partition_vertices(g in arb_graph()) {
            let comps = g.connected_components();
            let total: usize = comps.iter().map(|c| c.len()).sum();
            prop_assert_eq!(total, g.vertex_count());
            for e in g.edges() {
                let holder = comps.iter().filter(|c| c.contains(e.first())).count();
                prop_assert_eq!(holder, 1);
                prop_assert!(comps.iter().any(|c| c.contains(e.first()) && c.contains(e.second())));
            }
            let leasts: Vec<_> = comps.iter().map(|c| c.first().unwrap().clone()).collect();
            let mut sorted = leasts.clone();
            sorted.sort();
            prop_assert_eq!(leasts, sorted);
        }
    }
}
