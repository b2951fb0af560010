//! Tree decompositions: validation, width, nice form, exact and heuristic
//! construction, the post-order vertex ordering, and the decomposition
//! transforms that accompany each reduction stage.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::vertex::VertexId;

mod exact;
mod heuristic;
mod nice;
mod transform;

pub use exact::{treewidth_exact_small, EXACT_VERTEX_LIMIT};
pub use heuristic::heuristic_td;
pub use nice::{make_nice, postorder_ordering, NiceTreeDecomposition, NodeKind};
pub use transform::transform_td;

/// Rooted tree of bags. Nodes are indices; children keep insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<VertexSet>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl TreeDecomposition {
    pub fn single(bag: VertexSet) -> Self {
        TreeDecomposition { bags: vec![bag], parent: vec![None], children: vec![vec![]], root: 0 }
    }

    /// Builds a tree from parent links; exactly one node must be a root and
    /// every node must reach it.
    pub fn from_parents(bags: Vec<VertexSet>, parent: Vec<Option<usize>>) -> Result<Self> {
        let bad = |m: String| Err(Error::Decomposition(m));
        if bags.is_empty() || bags.len() != parent.len() {
            return bad("need one parent entry per bag and at least one node".into());
        }
        let roots: Vec<usize> = (0..bags.len()).filter(|&i| parent[i].is_none()).collect();
        if roots.len() != 1 {
            return bad(format!("expected exactly one root, found {}", roots.len()));
        }
        let mut children = vec![Vec::new(); bags.len()];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= bags.len() {
                    return bad(format!("node {i} has unknown parent {p}"));
                }
                children[p].push(i);
            }
        }
        let td = TreeDecomposition { bags, parent, children, root: roots[0] };
        if td.preorder().len() != td.len() {
            return bad("parent links contain a cycle".into());
        }
        Ok(td)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn bag(&self, node: usize) -> &VertexSet {
        &self.bags[node]
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub(crate) fn bag_mut(&mut self, node: usize) -> &mut VertexSet {
        &mut self.bags[node]
    }

    pub fn add_child(&mut self, parent: usize, bag: VertexSet) -> usize {
        let id = self.bags.len();
        self.bags.push(bag);
        self.parent.push(Some(parent));
        self.children.push(Vec::new());
        self.children[parent].push(id);
        id
    }

    /// Inserts a new node between `node` and its parent (or above the root).
    pub fn insert_above(&mut self, node: usize, bag: VertexSet) -> usize {
        let id = self.bags.len();
        let old = self.parent[node];
        self.bags.push(bag);
        self.parent.push(old);
        self.children.push(vec![node]);
        self.parent[node] = Some(id);
        match old {
            Some(p) => {
                let slot = self.children[p].iter().position(|&c| c == node).expect("child listed");
                self.children[p][slot] = id;
            }
            None => self.root = id,
        }
        id
    }

    /// Max bag size minus one; −1 for a decomposition of the empty graph.
    pub fn width(&self) -> i64 {
        self.bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
    }

    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        let mut seen = vec![false; self.len()];
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            out.push(x);
            stack.extend(self.children[x].iter().rev());
        }
        out
    }

    /// Children left to right, then the node.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((x, expanded)) = stack.pop() {
            if expanded {
                out.push(x);
            } else {
                stack.push((x, true));
                stack.extend(self.children[x].iter().rev().map(|&c| (c, false)));
            }
        }
        out
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.len()];
        for x in self.preorder() {
            if let Some(p) = self.parent[x] {
                d[x] = d[p] + 1;
            }
        }
        d
    }

    /// Topmost node whose bag contains every vertex of `vs`.
    pub fn topmost_containing(&self, vs: &[&VertexId]) -> Option<usize> {
        self.preorder().into_iter().find(|&x| vs.iter().all(|v| self.bags[x].contains(*v)))
    }

    /// `t_v`: the topmost node whose bag contains `v`.
    pub fn topmost(&self, v: &VertexId) -> Option<usize> {
        self.topmost_containing(&[v])
    }

    /// Nodes on the tree path from `a` to `b`, both included.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let up = |mut x: usize| {
            let mut v = vec![x];
            while let Some(p) = self.parent[x] {
                v.push(p);
                x = p;
            }
            v
        };
        let (pa, pb) = (up(a), up(b));
        let on_b: BTreeSet<usize> = pb.iter().copied().collect();
        let lca_pos = pa.iter().position(|x| on_b.contains(x)).expect("same tree");
        let lca = pa[lca_pos];
        let mut out: Vec<usize> = pa[..=lca_pos].to_vec();
        let down = pb.iter().position(|&x| x == lca).expect("lca on path");
        out.extend(pb[..down].iter().rev());
        out
    }

    /// Renumbers nodes in preorder so equal trees compare equal.
    pub fn canonical(&self) -> TreeDecomposition {
        let order = self.preorder();
        let mut new_id = vec![0; self.len()];
        for (i, &x) in order.iter().enumerate() {
            new_id[x] = i;
        }
        let bags = order.iter().map(|&x| self.bags[x].clone()).collect();
        let parent = order.iter().map(|&x| self.parent[x].map(|p| new_id[p])).collect();
        let children = order.iter().map(|&x| self.children[x].iter().map(|&c| new_id[c]).collect()).collect();
        TreeDecomposition { bags, parent, children, root: 0 }
    }

    pub fn vertices(&self) -> VertexSet {
        self.bags.iter().flatten().cloned().collect()
    }

    /// One line per node: `id parent [@kind] bag...`, parent `-` for the root.
    pub fn to_text(&self, kinds: Option<&[NodeKind]>) -> String {
        let mut out = format!("# {} nodes, width {}\n", self.len(), self.width());
        for x in self.preorder() {
            let parent = self.parent[x].map_or("-".to_string(), |p| p.to_string());
            let _ = write!(out, "{x} {parent}");
            if let Some(k) = kinds {
                let _ = write!(out, " @{}", k[x].name());
            }
            for v in &self.bags[x] {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the line format; `@kind` annotations are accepted and ignored
    /// (kinds follow from the bags).
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut ids: BTreeMap<String, usize> = BTreeMap::new();
        let mut rows = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::Parse { line: ln + 1, message: m.to_string() };
            let mut toks = line.split_whitespace();
            let id = toks.next().ok_or_else(|| err("missing node id"))?.to_string();
            let parent = toks.next().ok_or_else(|| err("missing parent (use `-` for the root)"))?.to_string();
            let mut bag = VertexSet::new();
            for t in toks {
                if t.starts_with('@') {
                    continue;
                }
                bag.insert(t.parse().map_err(|e: Error| err(&e.to_string()))?);
            }
            if ids.insert(id.clone(), rows.len()).is_some() {
                return Err(err(&format!("duplicate node id `{id}`")));
            }
            rows.push((ln + 1, parent, bag));
        }
        let mut bags = Vec::new();
        let mut parent = Vec::new();
        for (line, p, bag) in rows {
            bags.push(bag);
            parent.push(match p.as_str() {
                "-" => None,
                _ => Some(*ids.get(&p).ok_or_else(|| Error::Parse { line, message: format!("unknown parent `{p}`") })?),
            });
        }
        Self::from_parents(bags, parent)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{name}\" {{\n  node [shape=box];\n");
        for x in self.preorder() {
            let label: Vec<String> = self.bags[x].iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "  n{x} [label=\"{{{}}}\"];", label.join(", "));
        }
        for x in self.preorder() {
            if let Some(p) = self.parent[x] {
                let _ = writeln!(out, "  n{p} -- n{x};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    /// A bag mentions a vertex the graph does not have.
    UnknownVertex { node: usize, vertex: VertexId },
    UncoveredVertex(VertexId),
    UncoveredEdge(VertexId, VertexId),
    /// The nodes containing the vertex do not form a subtree.
    Disconnected(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdVerdict {
    Valid,
    Invalid(Vec<TdViolation>),
}

impl TdVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, TdVerdict::Valid)
    }
}

/// Checks vertex cover, edge cover and connectedness of occurrences.
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> TdVerdict {
    let mut out = Vec::new();
    let mut occ: BTreeMap<&VertexId, Vec<usize>> = BTreeMap::new();
    for (x, bag) in td.bags.iter().enumerate() {
        for v in bag {
            if !g.contains(v) {
                out.push(TdViolation::UnknownVertex { node: x, vertex: v.clone() });
            }
            occ.entry(v).or_default().push(x);
        }
    }
    for v in g.vertices() {
        if !occ.contains_key(v) {
            out.push(TdViolation::UncoveredVertex(v.clone()));
        }
    }
    for e in g.edges() {
        let both = occ.get(e.first()).is_some_and(|xs| xs.iter().any(|&x| td.bags[x].contains(e.second())));
        if !both {
            out.push(TdViolation::UncoveredEdge(e.first().clone(), e.second().clone()));
        }
    }
    for (v, xs) in &occ {
        let tops = xs.iter().filter(|&&x| td.parent[x].is_none_or(|p| !td.bags[p].contains(*v))).count();
        if tops != 1 {
            out.push(TdViolation::Disconnected((*v).clone()));
        }
    }
    if out.is_empty() {
        TdVerdict::Valid
    } else {
        TdVerdict::Invalid(out)
    }
}

/// Errors unless `td` is a valid decomposition of `g`.
pub fn require_valid(g: &Graph, td: &TreeDecomposition, what: &str) -> Result<()> {
    match validate_td(g, td) {
        TdVerdict::Valid => Ok(()),
        TdVerdict::Invalid(v) => Err(Error::Decomposition(format!("{what}: {:?}", v[0]))),
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn v(s: &str) -> VertexId {
        VertexId::named(s)
    }

    pub fn set(xs: &[&str]) -> VertexSet {
        xs.iter().map(|x| v(x)).collect()
    }

    pub use crate::samples::{diamond_graph, diamond_nice_td};
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn diamond_is_valid_with_width_two() {
        let td = diamond_nice_td();
        assert!(validate_td(&diamond_graph(), &td).is_valid());
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn missing_edge_is_reported() {
        let mut g = diamond_graph();
        g.add_edge(v("b"), v("d")).unwrap();
        match validate_td(&g, &diamond_nice_td()) {
            TdVerdict::Invalid(vs) => assert_eq!(vs, vec![TdViolation::UncoveredEdge(v("b"), v("d"))]),
            TdVerdict::Valid => panic!("expected a violation"),
        }
    }

    #[test]
    fn disconnected_occurrence() {
        let g = Graph::from_edges([], [(v("a"), v("b")), (v("b"), v("c"))]).unwrap();
        let td = TreeDecomposition::from_parents(
            vec![set(&["a", "b"]), set(&["b", "c"]), set(&["a"])],
            vec![None, Some(0), Some(1)],
        )
        .unwrap();
        assert_eq!(validate_td(&g, &td), TdVerdict::Invalid(vec![TdViolation::Disconnected(v("a"))]));
    }

    #[test]
    fn single_bag_always_valid() {
        let g = diamond_graph();
        let td = TreeDecomposition::single(g.vertices().cloned().collect());
        assert!(validate_td(&g, &td).is_valid());
        assert_eq!(td.width(), 3);
        assert_eq!(TreeDecomposition::single(VertexSet::new()).width(), -1);
        assert!(validate_td(&Graph::new(), &TreeDecomposition::single(VertexSet::new())).is_valid());
    }

    #[test]
    fn unknown_and_uncovered_vertices() {
        let g = Graph::from_edges([v("a"), v("z")], []).unwrap();
        let td = TreeDecomposition::single(set(&["a", "q"]));
        let TdVerdict::Invalid(vs) = validate_td(&g, &td) else { panic!() };
        assert!(vs.contains(&TdViolation::UnknownVertex { node: 0, vertex: v("q") }));
        assert!(vs.contains(&TdViolation::UncoveredVertex(v("z"))));
    }

    #[test]
    fn structure_errors() {
        assert!(TreeDecomposition::from_parents(vec![set(&[]), set(&[])], vec![None, None]).is_err());
        assert!(TreeDecomposition::from_parents(vec![set(&[]), set(&[])], vec![Some(1), Some(0)]).is_err());
        assert!(TreeDecomposition::from_parents(vec![], vec![]).is_err());
    }

    #[test]
    fn insert_above_and_path() {
        let mut td = diamond_nice_td();
        let x = td.insert_above(4, set(&["a", "b", "c"]));
        assert_eq!(td.parent(4), Some(x));
        assert_eq!(td.parent(x), Some(3));
        assert_eq!(td.path(5, 10), vec![5, 4, x, 3, 2, 8, 9, 10]);
        assert_eq!(td.path(2, 2), vec![2]);
        let r = td.insert_above(0, set(&[]));
        assert_eq!(td.root(), r);
    }

    #[test]
    fn text_round_trip() {
        let td = diamond_nice_td();
        let text = td.to_text(None);
        let back = TreeDecomposition::parse_text(&text).unwrap();
        assert_eq!(back.canonical(), td.canonical());
        assert!(TreeDecomposition::parse_text("0 - a\n1 7 b\n").is_err());
        assert!(TreeDecomposition::parse_text("0 - a/zz\n").is_err());
    }

    #[test]
    fn topmost_nodes() {
        let td = diamond_nice_td();
        assert_eq!(td.topmost(&v("a")), Some(1));
        assert_eq!(td.topmost(&v("b")), Some(4));
        assert_eq!(td.topmost_containing(&[&v("c"), &v("d")]), Some(9));
        assert_eq!(td.topmost(&v("q")), None);
    }
}
