use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::vertex::VertexId;

use super::TreeDecomposition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(VertexId),
    Forget(VertexId),
    Join,
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::Leaf => "leaf",
            NodeKind::Introduce(_) => "introduce",
            NodeKind::Forget(_) => "forget",
            NodeKind::Join => "join",
        }
    }
}

/// Empty root and leaves, binary joins over identical bags, and single
/// vertex introduce/forget steps everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    td: TreeDecomposition,
    kinds: Vec<NodeKind>,
}

impl NiceTreeDecomposition {
    /// Classifies every node, failing if `td` is not nice.
    pub fn from_td(td: TreeDecomposition) -> Result<Self> {
        let bad = |m: String| Err(Error::Decomposition(format!("not nice: {m}")));
        if !td.bag(td.root()).is_empty() {
            return bad("root bag is not empty".into());
        }
        let mut kinds = Vec::with_capacity(td.len());
        for x in 0..td.len() {
            let bag = td.bag(x);
            let kind = match td.children(x) {
                [] if bag.is_empty() => NodeKind::Leaf,
                [] => return bad(format!("leaf {x} has a non-empty bag")),
                &[c] => {
                    let child = td.bag(c);
                    let added: Vec<&VertexId> = bag.difference(child).collect();
                    let removed: Vec<&VertexId> = child.difference(bag).collect();
                    match (added.as_slice(), removed.as_slice()) {
                        ([v], []) => NodeKind::Introduce((*v).clone()),
                        ([], [v]) => NodeKind::Forget((*v).clone()),
                        _ => return bad(format!("node {x} differs from its child by more than one vertex")),
                    }
                }
                &[l, r] if td.bag(l) == bag && td.bag(r) == bag => NodeKind::Join,
                &[_, _] => return bad(format!("join {x} has children with different bags")),
                _ => return bad(format!("node {x} has more than two children")),
            };
            kinds.push(kind);
        }
        Ok(NiceTreeDecomposition { td, kinds })
    }

    pub fn td(&self) -> &TreeDecomposition {
        &self.td
    }

    pub fn into_td(self) -> TreeDecomposition {
        self.td
    }

    pub fn kind(&self, node: usize) -> &NodeKind {
        &self.kinds[node]
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    pub fn to_text(&self) -> String {
        self.td.to_text(Some(&self.kinds))
    }
}

struct Arena {
    bags: Vec<VertexSet>,
    children: Vec<Vec<usize>>,
}

impl Arena {
    fn push(&mut self, bag: VertexSet, children: Vec<usize>) -> usize {
        self.bags.push(bag);
        self.children.push(children);
        self.bags.len() - 1
    }

    /// Forgets `from \ to`, then introduces `to \ from`, one vertex per node.
    fn transition(&mut self, mut node: usize, to: &VertexSet) -> usize {
        let mut bag = self.bags[node].clone();
        let forget: Vec<VertexId> = bag.difference(to).cloned().collect();
        let introduce: Vec<VertexId> = to.difference(&bag).cloned().collect();
        for v in forget {
            bag.remove(&v);
            node = self.push(bag.clone(), vec![node]);
        }
        for v in introduce {
            bag.insert(v);
            node = self.push(bag.clone(), vec![node]);
        }
        node
    }
}

/// Standard conversion: forget/introduce steps on every edge, binary join
/// trees for branching nodes, introduce chains above empty leaves and a
/// forget chain below an empty root. Width is preserved and nice input is
/// returned unchanged up to node numbering.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let mut arena = Arena { bags: Vec::new(), children: Vec::new() };
    let mut built = vec![usize::MAX; td.len()];
    for x in td.postorder() {
        let bag = td.bag(x);
        let mut branches = Vec::new();
        for &c in td.children(x) {
            branches.push(arena.transition(built[c], bag));
        }
        built[x] = match branches.len() {
            0 => {
                let leaf = arena.push(VertexSet::new(), vec![]);
                arena.transition(leaf, bag)
            }
            1 => branches[0],
            _ => {
                let mut acc = branches[0];
                for &b in &branches[1..] {
                    acc = arena.push(bag.clone(), vec![acc, b]);
                }
                acc
            }
        };
    }
    let root = arena.transition(built[td.root()], &VertexSet::new());

    // preorder renumbering; a child's subtree is numbered before its right
    // sibling, so index order of children is left to right
    let mut bags = Vec::with_capacity(arena.bags.len());
    let mut parent = Vec::with_capacity(arena.bags.len());
    let mut stack = vec![(root, None)];
    while let Some((x, p)) = stack.pop() {
        let id = bags.len();
        bags.push(std::mem::take(&mut arena.bags[x]));
        parent.push(p);
        stack.extend(arena.children[x].iter().rev().map(|&c| (c, Some(id))));
    }
    let td = TreeDecomposition::from_parents(bags, parent).expect("arena is a tree");
    NiceTreeDecomposition::from_td(td).expect("construction yields a nice decomposition")
}

/// Vertices of `eligible` in the order in which they occur for the last
/// time during a post-order traversal; ties at one node are broken by the
/// vertex order.
pub fn postorder_ordering(td: &NiceTreeDecomposition, eligible: &VertexSet) -> Result<Vec<VertexId>> {
    let td = td.td();
    let mut out = Vec::with_capacity(eligible.len());
    let mut seen = VertexSet::new();
    for x in td.postorder() {
        let parent_bag = td.parent(x).map(|p| td.bag(p));
        for v in td.bag(x) {
            let last = parent_bag.is_none_or(|pb| !pb.contains(v));
            if last && eligible.contains(v) && seen.insert(v.clone()) {
                out.push(v.clone());
            }
        }
    }
    if let Some(missing) = eligible.iter().find(|v| !seen.contains(*v)) {
        return Err(Error::Decomposition(format!("vertex `{missing}` occurs in no bag")));
    }
    Ok(out)
}
