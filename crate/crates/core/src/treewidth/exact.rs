use crate::error::{Error, Result};
use crate::graph::Graph;

pub const EXACT_VERTEX_LIMIT: usize = 12;

/// Exact treewidth by dynamic programming over the set of already
/// eliminated vertices: TW(S) = min over v ∈ S of max(TW(S∖v), |Q(S∖v, v)|),
/// where Q(S, v) are the vertices outside S ∪ {v} reachable from v through S.
/// Returns −1 for the empty graph.
pub fn treewidth_exact_small(g: &Graph) -> Result<i64> {
    let n = g.vertex_count();
    if n > EXACT_VERTEX_LIMIT {
        return Err(Error::TooLarge { what: "exact treewidth input", size: n, limit: EXACT_VERTEX_LIMIT });
    }
    if n == 0 {
        return Ok(-1);
    }
    let verts: Vec<_> = g.vertices().collect();
    let adj: Vec<u32> = verts
        .iter()
        .map(|v| {
            let ns = g.neighbors(v).expect("vertex of g");
            verts.iter().enumerate().filter(|(_, w)| ns.contains(**w)).fold(0u32, |m, (j, _)| m | 1 << j)
        })
        .collect();

    // vertices outside `s` and ≠ v reachable from v via interior vertices in `s`
    let q = |s: u32, v: usize| -> u32 {
        let mut inside = 0u32;
        let mut frontier = 1u32 << v;
        let mut reached = 0u32;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = adj[x];
            reached |= nb & !s;
            let fresh = nb & s & !inside;
            inside |= fresh;
            frontier |= fresh;
        }
        reached & !(1 << v)
    };

    let full = (1u32 << n) - 1;
    let mut tw = vec![i64::MAX; 1 << n];
    tw[0] = -1;
    for s in 1..=full {
        let mut best = i64::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let cand = tw[without as usize].max(q(without, v).count_ones() as i64);
            best = best.min(cand);
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize])
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn edges(list: &[(&str, &str)]) -> Graph {
        Graph::from_edges([], list.iter().map(|(a, b)| (v(a), v(b)))).unwrap()
    }

    #[test]
    fn known_values() {
        assert_eq!(treewidth_exact_small(&diamond_graph()).unwrap(), 2);
        assert_eq!(treewidth_exact_small(&edges(&[("a", "b"), ("b", "c"), ("b", "d"), ("d", "e")])).unwrap(), 1);
        let k5: Vec<(String, String)> =
            (0..5).flat_map(|i| (i + 1..5).map(move |j| (format!("v{i}"), format!("v{j}")))).collect();
        let k5: Vec<(&str, &str)> = k5.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(treewidth_exact_small(&edges(&k5)).unwrap(), 4);
        assert_eq!(treewidth_exact_small(&edges(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])).unwrap(), 2);
        assert_eq!(treewidth_exact_small(&Graph::from_edges([v("a"), v("b")], []).unwrap()).unwrap(), 0);
        assert_eq!(treewidth_exact_small(&Graph::new()).unwrap(), -1);
    }

    #[test]
    fn grid_three_by_three() {
        let mut list = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                if c < 2 {
                    list.push((format!("g{r}{c}"), format!("g{r}{}", c + 1)));
                }
                if r < 2 {
                    list.push((format!("g{r}{c}"), format!("g{}{c}", r + 1)));
                }
            }
        }
        let list: Vec<(&str, &str)> = list.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(treewidth_exact_small(&edges(&list)).unwrap(), 3);
    }

    #[test]
    fn guard() {
        let g = Graph::from_edges((0..13).map(|i| v(&format!("x{i}"))), []).unwrap();
        assert!(treewidth_exact_small(&g).is_err());
    }
}
