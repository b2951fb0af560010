//! Minimum Maximum Outdegree: weighted graphs, orientations and a
//! brute-force decision procedure.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::vertex::VertexId;

/// Cap on the total edge weight, which bounds the size of reduced instances.
pub const MAX_TOTAL_WEIGHT: u64 = 1_000_000;

/// Orientations are enumerated exhaustively up to this many edges.
pub const MAX_BRUTE_FORCE_EDGES: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MmoInstance {
    graph: Graph,
    weights: BTreeMap<Edge, u64>,
    r: u64,
}

impl MmoInstance {
    pub fn new(graph: Graph, weights: BTreeMap<Edge, u64>, r: u64) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidInstance(m));
        if r == 0 {
            return invalid("outdegree bound r must be positive".into());
        }
        if weights.len() != graph.edge_count() {
            return invalid("weight map must cover exactly the edge set".into());
        }
        let mut total = 0u64;
        for (e, &w) in &weights {
            if !graph.has_edge(e.first(), e.second()) {
                return invalid(format!("weight given for non-edge ({}, {})", e.first(), e.second()));
            }
            if w == 0 {
                return invalid(format!("edge ({}, {}) has weight 0", e.first(), e.second()));
            }
            total = total.saturating_add(w);
        }
        if total > MAX_TOTAL_WEIGHT {
            return invalid(format!("total weight {total} exceeds {MAX_TOTAL_WEIGHT}"));
        }
        Ok(MmoInstance { graph, weights, r })
    }

    pub fn from_weighted_edges<V, E>(vertices: V, edges: E, r: u64) -> Result<Self>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId, u64)>,
    {
        let mut graph = Graph::from_edges(vertices, [])?;
        let mut weights = BTreeMap::new();
        for (u, v, w) in edges {
            if !graph.add_edge(u.clone(), v.clone())? {
                return Err(Error::InvalidInstance(format!("duplicate edge ({u}, {v})")));
            }
            weights.insert(Edge::new(u, v)?, w);
        }
        Self::new(graph, weights, r)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn weights(&self) -> &BTreeMap<Edge, u64> {
        &self.weights
    }

    pub fn weight(&self, e: &Edge) -> Option<u64> {
        self.weights.get(e).copied()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.values().sum()
    }
}

/// Direction of each edge, stored as the edge's tail.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Orientation {
    tails: BTreeMap<Edge, VertexId>,
}

impl Orientation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Directs the edge between `from` and `to` as `from → to`.
    pub fn orient(&mut self, from: VertexId, to: VertexId) -> Result<()> {
        let e = Edge::new(from.clone(), to)?;
        self.tails.insert(e, from);
        Ok(())
    }

    pub fn tail(&self, e: &Edge) -> Option<&VertexId> {
        self.tails.get(e)
    }

    pub fn head(&self, e: &Edge) -> Option<&VertexId> {
        let (key, t) = self.tails.get_key_value(e)?;
        key.other(t)
    }

    /// `(tail, head)` for every oriented edge.
    pub fn arcs(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> + '_ {
        self.tails.iter().map(|(e, t)| (t, e.other(t).expect("tail is an endpoint")))
    }

    pub fn len(&self) -> usize {
        self.tails.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tails.is_empty()
    }

    pub fn flipped(&self, e: &Edge) -> Orientation {
        let mut o = self.clone();
        if let Some(t) = o.tails.get_mut(e) {
            *t = e.other(t).expect("tail is an endpoint").clone();
        }
        o
    }

    /// Checks that exactly the edges of `instance` are oriented.
    pub fn check_covers(&self, instance: &MmoInstance) -> Result<()> {
        for e in instance.graph.edges() {
            if !self.tails.contains_key(&e) {
                return Err(Error::IncompleteOrientation(e.first().clone(), e.second().clone()));
            }
        }
        if let Some(extra) = self.tails.keys().find(|e| !instance.weights.contains_key(*e)) {
            return Err(Error::InvalidInstance(format!(
                "orientation mentions non-edge ({}, {})",
                extra.first(),
                extra.second()
            )));
        }
        Ok(())
    }
}

/// Sum of outgoing weights per vertex (zero for sinks).
pub fn out_weights(instance: &MmoInstance, o: &Orientation) -> Result<BTreeMap<VertexId, u64>> {
    o.check_covers(instance)?;
    let mut out: BTreeMap<VertexId, u64> = instance.graph.vertices().map(|v| (v.clone(), 0)).collect();
    for (e, tail) in &o.tails {
        *out.get_mut(tail).expect("tail in graph") += instance.weights[e];
    }
    Ok(out)
}

pub fn in_weights(instance: &MmoInstance, o: &Orientation) -> Result<BTreeMap<VertexId, u64>> {
    o.check_covers(instance)?;
    let mut inw: BTreeMap<VertexId, u64> = instance.graph.vertices().map(|v| (v.clone(), 0)).collect();
    for (e, tail) in &o.tails {
        let head = e.other(tail).expect("tail is an endpoint");
        *inw.get_mut(head).expect("head in graph") += instance.weights[e];
    }
    Ok(inw)
}

pub fn max_weighted_outdegree(instance: &MmoInstance, o: &Orientation) -> Result<u64> {
    Ok(out_weights(instance, o)?.into_values().max().unwrap_or(0))
}

/// Finds the first feasible orientation in lexicographic order over the
/// sorted edge list, where each edge first tries `first → second`.
pub fn solve_mmo(instance: &MmoInstance) -> Result<Option<Orientation>> {
    let edges: Vec<(Edge, u64)> = instance.weights.iter().map(|(e, &w)| (e.clone(), w)).collect();
    if edges.len() > MAX_BRUTE_FORCE_EDGES {
        return Err(Error::TooLarge {
            what: "MMO brute force (raise the edge guard or shrink the instance)",
            size: edges.len(),
            limit: MAX_BRUTE_FORCE_EDGES,
        });
    }
    let index: BTreeMap<&VertexId, usize> = instance.graph.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let ends: Vec<[usize; 2]> = edges.iter().map(|(e, _)| [index[e.first()], index[e.second()]]).collect();
    let mut load = vec![0u64; index.len()];
    let mut choice = vec![0usize; edges.len()];

    fn search(i: usize, ends: &[[usize; 2]], edges: &[(Edge, u64)], r: u64, load: &mut [u64], choice: &mut [usize]) -> bool {
        if i == ends.len() {
            return true;
        }
        for side in 0..2 {
            let tail = ends[i][side];
            load[tail] += edges[i].1;
            choice[i] = side;
            if load[tail] <= r && search(i + 1, ends, edges, r, load, choice) {
                return true;
            }
            load[tail] -= edges[i].1;
        }
        false
    }

    if !search(0, &ends, &edges, instance.r, &mut load, &mut choice) {
        return Ok(None);
    }
    let mut o = Orientation::new();
    for ((e, _), side) in edges.iter().zip(choice) {
        let (tail, head) = if side == 0 { (e.first(), e.second()) } else { (e.second(), e.first()) };
        o.orient(tail.clone(), head.clone())?;
    }
    Ok(Some(o))
}
