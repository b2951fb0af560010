use std::collections::BTreeMap;

use crate::graph::{Graph, VertexSet};
use crate::vertex::VertexId;

use super::TreeDecomposition;

/// Min-fill elimination. Ties go to the smaller current degree, then to the
/// smaller vertex. Each eliminated vertex yields the bag of itself and its
/// remaining neighbours, hung below the bag of the earliest-eliminated
/// neighbour; per-component roots are chained together.
pub fn heuristic_td(g: &Graph) -> TreeDecomposition {
    if g.vertex_count() == 0 {
        return TreeDecomposition::single(VertexSet::new());
    }
    let mut adj: BTreeMap<VertexId, VertexSet> =
        g.vertices().map(|v| (v.clone(), g.neighbors(v).expect("vertex of g").clone())).collect();
    let mut order = Vec::new();
    let mut bags = Vec::new();
    while !adj.is_empty() {
        let (v, _) = adj
            .iter()
            .map(|(v, ns)| {
                let ns: Vec<&VertexId> = ns.iter().collect();
                let mut fill = 0usize;
                for (i, a) in ns.iter().enumerate() {
                    for b in &ns[i + 1..] {
                        if !adj[*a].contains(*b) {
                            fill += 1;
                        }
                    }
                }
                (v, (fill, ns.len()))
            })
            .min_by(|(v1, k1), (v2, k2)| k1.cmp(k2).then(v1.cmp(v2)))
            .map(|(v, k)| (v.clone(), k))
            .expect("non-empty");
        let ns = adj.remove(&v).expect("present");
        for a in &ns {
            let entry = adj.get_mut(a).expect("neighbour present");
            entry.remove(&v);
            entry.extend(ns.iter().filter(|b| *b != a).cloned());
        }
        let mut bag = ns.clone();
        bag.insert(v.clone());
        order.push(v);
        bags.push(bag);
    }
    let pos: BTreeMap<&VertexId, usize> = order.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<Option<usize>> = bags
        .iter()
        .enumerate()
        .map(|(i, bag)| bag.iter().map(|u| pos[u]).filter(|&j| j > i).min())
        .collect();
    let roots: Vec<usize> = (0..bags.len()).filter(|&i| parent[i].is_none()).collect();
    for w in roots.windows(2) {
        parent[w[0]] = Some(w[1]);
    }
    TreeDecomposition::from_parents(bags, parent).expect("elimination tree")
}
