//! Defensive alliance instances, the alliance predicate and defenses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, UnorderedPair, VertexSet};
use crate::vertex::VertexId;

/// Whether solutions may have at most `k` elements or exactly `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    AtMost,
    Exact,
}

/// Which side constraints an instance uses, from most to least general.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    Plain,
    F,
    FN,
    FNC,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::Plain => "DA",
            Variant::F => "DA^F",
            Variant::FN => "DA^FN",
            Variant::FNC => "DA^FNC",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllianceInstance {
    graph: Graph,
    k: usize,
    forbidden: VertexSet,
    necessary: VertexSet,
    pairs: BTreeSet<UnorderedPair>,
    mode: Mode,
}

impl AllianceInstance {
    pub fn new(
        graph: Graph,
        k: usize,
        forbidden: VertexSet,
        necessary: VertexSet,
        pairs: BTreeSet<UnorderedPair>,
        mode: Mode,
    ) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidInstance(m));
        if mode == Mode::AtMost && k == 0 {
            return invalid("k = 0 admits no non-empty solution in at-most mode".into());
        }
        for v in forbidden.iter().chain(&necessary) {
            if !graph.contains(v) {
                return Err(Error::UnknownVertex(v.clone()));
            }
        }
        if let Some(v) = forbidden.intersection(&necessary).next() {
            return invalid(format!("`{v}` is both forbidden and necessary"));
        }
        for p in &pairs {
            for end in [p.first(), p.second()] {
                if !graph.contains(end) {
                    return Err(Error::UnknownVertex(end.clone()));
                }
                if forbidden.contains(end) {
                    return invalid(format!("pair ({}, {}) uses forbidden vertex `{end}`", p.first(), p.second()));
                }
            }
            if graph.has_edge(p.first(), p.second()) {
                log::warn!("complementary pair ({}, {}) is also an edge", p.first(), p.second());
            }
        }
        Ok(AllianceInstance { graph, k, forbidden, necessary, pairs, mode })
    }

    pub fn plain(graph: Graph, k: usize, mode: Mode) -> Result<Self> {
        Self::new(graph, k, VertexSet::new(), VertexSet::new(), BTreeSet::new(), mode)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn forbidden(&self) -> &VertexSet {
        &self.forbidden
    }

    pub fn necessary(&self) -> &VertexSet {
        &self.necessary
    }

    pub fn pairs(&self) -> &BTreeSet<UnorderedPair> {
        &self.pairs
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The same instance read under another mode.
    pub fn with_mode(&self, mode: Mode) -> Result<Self> {
        Self::new(
            self.graph.clone(),
            self.k,
            self.forbidden.clone(),
            self.necessary.clone(),
            self.pairs.clone(),
            mode,
        )
    }

    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(
            self.graph.clone(),
            k,
            self.forbidden.clone(),
            self.necessary.clone(),
            self.pairs.clone(),
            self.mode,
        )
    }

    pub fn variant(&self) -> Variant {
        if !self.pairs.is_empty() {
            Variant::FNC
        } else if !self.necessary.is_empty() {
            Variant::FN
        } else if !self.forbidden.is_empty() {
            Variant::F
        } else {
            Variant::Plain
        }
    }

    /// Pairs that duplicate an edge of the graph.
    pub fn pair_edge_overlaps(&self) -> impl Iterator<Item = &UnorderedPair> + '_ {
        self.pairs.iter().filter(|p| self.graph.has_edge(p.first(), p.second()))
    }

    /// Non-forbidden vertices.
    pub fn allowed(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.graph.vertices().filter(|v| !self.forbidden.contains(*v))
    }

    /// Non-forbidden, non-necessary vertices.
    pub fn optional(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.allowed().filter(|v| !self.necessary.contains(*v))
    }

    pub fn size_ok(&self, size: usize) -> bool {
        match self.mode {
            Mode::AtMost => (1..=self.k).contains(&size),
            Mode::Exact => size >= 1 && size == self.k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No { violators: VertexSet },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes)
    }
}

fn check_subset(graph: &Graph, s: &VertexSet) -> Result<()> {
    match s.iter().find(|v| !graph.contains(v)) {
        Some(v) => Err(Error::UnknownVertex(v.clone())),
        None => Ok(()),
    }
}

/// Counts (defenders, attackers) of `v` with respect to `s`.
fn tally(graph: &Graph, s: &VertexSet, v: &VertexId) -> Result<(usize, usize)> {
    let ns = graph.neighbors(v)?;
    let inside = ns.iter().filter(|w| s.contains(*w)).count() + usize::from(s.contains(v));
    Ok((inside, ns.len() + 1 - inside))
}

/// Checks |N[v] ∩ S| ≥ |N[v] \ S| for every `v` in `s`, reporting every
/// vertex that fails.
pub fn is_defensive_alliance(graph: &Graph, s: &VertexSet) -> Result<Verdict> {
    check_subset(graph, s)?;
    let mut violators = VertexSet::new();
    for v in s {
        let (defenders, attackers) = tally(graph, s, v)?;
        if defenders < attackers {
            violators.insert(v.clone());
        }
    }
    Ok(if violators.is_empty() { Verdict::Yes } else { Verdict::No { violators } })
}

/// An injective assignment of each attacker of `vertex` to a defender.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defense {
    pub vertex: VertexId,
    pub assignment: BTreeMap<VertexId, VertexId>,
}

impl Defense {
    /// Checks domain, codomain and injectivity against `graph` and `s`.
    pub fn is_valid(&self, graph: &Graph, s: &VertexSet) -> bool {
        let Ok(closed) = graph.closed_neighborhood(&self.vertex) else {
            return false;
        };
        let attackers: VertexSet = closed.iter().filter(|w| !s.contains(*w)).cloned().collect();
        let domain: VertexSet = self.assignment.keys().cloned().collect();
        let image: VertexSet = self.assignment.values().cloned().collect();
        domain == attackers
            && image.len() == self.assignment.len()
            && image.iter().all(|d| closed.contains(d) && s.contains(d))
    }
}

/// Pairs attackers with defenders in sorted order. Any defender can repel any
/// attacker, so a defense exists exactly when the counting condition holds.
pub fn construct_defense(graph: &Graph, s: &VertexSet, v: &VertexId) -> Result<Option<Defense>> {
    check_subset(graph, s)?;
    if !s.contains(v) {
        return Err(Error::NotInSet(v.clone()));
    }
    let closed = graph.closed_neighborhood(v)?;
    let (defenders, attackers): (Vec<_>, Vec<_>) = closed.into_iter().partition(|w| s.contains(w));
    if attackers.len() > defenders.len() {
        return Ok(None);
    }
    Ok(Some(Defense {
        vertex: v.clone(),
        assignment: attackers.into_iter().zip(defenders).collect(),
    }))
}

/// Full solution check: alliance property, side constraints and size bound.
pub fn is_solution(instance: &AllianceInstance, s: &VertexSet) -> Result<bool> {
    check_subset(&instance.graph, s)?;
    if !instance.size_ok(s.len()) {
        return Ok(false);
    }
    if s.iter().any(|v| instance.forbidden.contains(v)) || !instance.necessary.is_subset(s) {
        return Ok(false);
    }
    if instance.pairs.iter().any(|p| s.contains(p.first()) == s.contains(p.second())) {
        return Ok(false);
    }
    Ok(is_defensive_alliance(&instance.graph, s)?.is_yes())
}

/// Instance graph with complementary pairs added as edges.
pub fn primal_graph(instance: &AllianceInstance) -> Graph {
    let mut g = instance.graph.clone();
    for p in &instance.pairs {
        g.add_edge(p.first().clone(), p.second().clone()).expect("pairs have distinct endpoints");
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VertexId {
        VertexId::named(s)
    }

    fn set(names: &[&str]) -> VertexSet {
        names.iter().map(|s| v(s)).collect()
    }

    fn five_vertex_graph() -> Graph {
        let edges = [("a", "b"), ("c", "a"), ("a", "d"), ("d", "b"), ("b", "e"), ("c", "d"), ("d", "e"), ("c", "e")];
        Graph::from_edges([], edges.iter().map(|(x, y)| (v(x), v(y)))).unwrap()
    }

    fn seven_vertex_instance(k: usize) -> AllianceInstance {
        let edges = [("a", "b"), ("b", "e"), ("e", "a"), ("d", "e"), ("e", "f"), ("e", "c"), ("c", "g")];
        let g = Graph::from_edges([], edges.iter().map(|(x, y)| (v(x), v(y)))).unwrap();
        let pairs = [UnorderedPair::new(v("b"), v("c")).unwrap()].into();
        AllianceInstance::new(g, k, set(&["d", "f"]), set(&["a", "g"]), pairs, Mode::AtMost).unwrap()
    }

    #[test]
    fn five_vertex_alliances() {
        let g = five_vertex_graph();
        assert_eq!(is_defensive_alliance(&g, &set(&["a", "b"])).unwrap(), Verdict::Yes);
        assert_eq!(
            is_defensive_alliance(&g, &set(&["a", "d"])).unwrap(),
            Verdict::No { violators: set(&["d"]) }
        );
        assert!(is_defensive_alliance(&g, &VertexSet::new()).unwrap().is_yes());
        assert!(is_defensive_alliance(&g, &set(&["z"])).is_err());
    }

    #[test]
    fn isolated_singleton_is_alliance() {
        let g = Graph::from_edges([v("x")], []).unwrap();
        assert!(is_defensive_alliance(&g, &set(&["x"])).unwrap().is_yes());
    }

    #[test]
    fn defenses() {
        let g = five_vertex_graph();
        let s = set(&["a", "b"]);
        let d = construct_defense(&g, &s, &v("a")).unwrap().unwrap();
        assert_eq!(d.assignment.keys().cloned().collect::<VertexSet>(), set(&["c", "d"]));
        assert!(d.is_valid(&g, &s));
        assert_eq!(construct_defense(&g, &set(&["a", "d"]), &v("d")).unwrap(), None);
        assert!(matches!(construct_defense(&g, &s, &v("c")), Err(Error::NotInSet(_))));

        let all: VertexSet = g.vertices().cloned().collect();
        let d = construct_defense(&g, &all, &v("c")).unwrap().unwrap();
        assert!(d.assignment.is_empty());
    }

    #[test]
    fn seven_vertex_solutions() {
        let inst = seven_vertex_instance(3);
        assert_eq!(inst.variant(), Variant::FNC);
        assert!(is_solution(&inst, &set(&["a", "b", "g"])).unwrap());
        assert!(!is_solution(&inst, &set(&["a", "g", "c"])).unwrap());
        assert!(!is_solution(&inst, &VertexSet::new()).unwrap());
        // exact mode with the same size still accepts
        assert!(is_solution(&inst.with_mode(Mode::Exact).unwrap(), &set(&["a", "b", "g"])).unwrap());
        assert!(!is_solution(&inst.with_k(2).unwrap(), &set(&["a", "b", "g"])).unwrap());
    }

    #[test]
    fn primal_graph_adds_pairs() {
        let inst = seven_vertex_instance(3);
        let p = primal_graph(&inst);
        assert_eq!(p.edge_count(), inst.graph().edge_count() + 1);
        assert!(p.has_edge(&v("b"), &v("c")));

        let plain = AllianceInstance::plain(five_vertex_graph(), 2, Mode::AtMost).unwrap();
        assert_eq!(primal_graph(&plain), five_vertex_graph());

        let overlap = AllianceInstance::new(
            five_vertex_graph(),
            2,
            VertexSet::new(),
            VertexSet::new(),
            [UnorderedPair::new(v("a"), v("b")).unwrap()].into(),
            Mode::AtMost,
        )
        .unwrap();
        assert_eq!(overlap.pair_edge_overlaps().count(), 1);
        assert_eq!(primal_graph(&overlap), five_vertex_graph());
    }

    #[test]
    fn validation() {
        let g = five_vertex_graph();
        assert!(AllianceInstance::plain(g.clone(), 0, Mode::AtMost).is_err());
        assert!(AllianceInstance::plain(g.clone(), 0, Mode::Exact).is_ok());
        let both = AllianceInstance::new(g.clone(), 2, set(&["a"]), set(&["a"]), BTreeSet::new(), Mode::AtMost);
        assert!(both.is_err());
        let pair_forbidden = AllianceInstance::new(
            g.clone(),
            2,
            set(&["a"]),
            VertexSet::new(),
            [UnorderedPair::new(v("a"), v("b")).unwrap()].into(),
            Mode::AtMost,
        );
        assert!(pair_forbidden.is_err());
        let unknown = AllianceInstance::new(g, 2, set(&["q"]), VertexSet::new(), BTreeSet::new(), Mode::AtMost);
        assert!(matches!(unknown, Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn variants() {
        let g = five_vertex_graph();
        let mk = |f: &[&str], n: &[&str]| {
            AllianceInstance::new(g.clone(), 2, set(f), set(n), BTreeSet::new(), Mode::AtMost).unwrap().variant()
        };
        assert_eq!(mk(&[], &[]), Variant::Plain);
        assert_eq!(mk(&["a"], &[]), Variant::F);
        assert_eq!(mk(&["a"], &["b"]), Variant::FN);
        assert_eq!(mk(&[], &["b"]), Variant::FN);
    }

    /// Adding a vertex can destroy the alliance property.
    #[test]
    fn alliance_property_is_not_monotone() {
        // pendant a hanging off a hub b of degree 4
        let g = Graph::from_edges([], [("a", "b"), ("b", "c"), ("b", "d"), ("b", "e")].map(|(x, y)| (v(x), v(y)))).unwrap();
        let verts: Vec<VertexId> = g.vertices().cloned().collect();
        let subsets: Vec<VertexSet> = (0u32..1 << verts.len())
            .map(|m| verts.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| x.clone()).collect())
            .collect();
        let yes: Vec<&VertexSet> = subsets
            .iter()
            .filter(|s| !s.is_empty() && is_defensive_alliance(&g, s).unwrap().is_yes())
            .collect();
        let witness = yes.iter().find_map(|s| {
            subsets
                .iter()
                .find(|t| s.is_subset(t) && t.len() > s.len() && !is_defensive_alliance(&g, t).unwrap().is_yes())
                .map(|t| ((*s).clone(), t.clone()))
        });
        let (small, big) = witness.expect("some superset breaks an alliance");
        assert!(small.is_subset(&big));
    }
}
