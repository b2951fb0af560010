//! Seeded random instances. All generators draw from a caller-supplied RNG;
//! [`rng`] gives the reproducible ChaCha stream used by the CLI and tests.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alliance::{AllianceInstance, Mode};
use crate::graph::{Graph, UnorderedPair, VertexSet};
use crate::mmo::MmoInstance;
use crate::vertex::VertexId;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn names(n: usize) -> Vec<VertexId> {
    (0..n).map(|i| VertexId::named(format!("v{i}"))).collect()
}

/// G(n, p) on vertices v0..v{n-1}.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let vs = names(n);
    let mut g = Graph::from_edges(vs.clone(), []).expect("fresh vertices");
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(vs[i].clone(), vs[j].clone()).expect("distinct endpoints");
            }
        }
    }
    g
}

#[derive(Clone, Copy, Debug)]
pub struct MmoParams {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_weight: u64,
    pub max_r: u64,
}

impl Default for MmoParams {
    fn default() -> Self {
        MmoParams { max_vertices: 4, max_edges: 5, max_weight: 3, max_r: 4 }
    }
}

/// 2..=max_vertices vertices, at least one edge.
pub fn random_mmo<R: Rng>(rng: &mut R, p: &MmoParams) -> MmoInstance {
    let n = rng.gen_range(2..=p.max_vertices.max(2));
    let vs = names(n);
    let mut slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    slots.shuffle(rng);
    let m = rng.gen_range(1..=p.max_edges.min(slots.len()).max(1));
    let edges: Vec<_> = slots[..m]
        .iter()
        .map(|&(i, j)| (vs[i].clone(), vs[j].clone(), rng.gen_range(1..=p.max_weight.max(1))))
        .collect();
    let r = rng.gen_range(1..=p.max_r.max(1));
    MmoInstance::from_weighted_edges(vs, edges, r).expect("generated instance is valid")
}

/// Roles for vertices outside the pairs: 0 optional, 1 forbidden, 2 necessary.
fn roles<R: Rng>(rng: &mut R, vs: &[VertexId], skip: &VertexSet, forbid: bool, need: bool) -> (VertexSet, VertexSet) {
    let (mut f, mut nset) = (VertexSet::new(), VertexSet::new());
    for v in vs.iter().filter(|v| !skip.contains(*v)) {
        match rng.gen_range(0..3) {
            1 if forbid => {
                f.insert(v.clone());
            }
            2 if need => {
                nset.insert(v.clone());
            }
            _ => {}
        }
    }
    (f, nset)
}

fn mode<R: Rng>(rng: &mut R) -> Mode {
    if rng.gen_bool(0.5) {
        Mode::Exact
    } else {
        Mode::AtMost
    }
}

/// DA^FNC instance on n vertices with `pairs` complementary pairs and
/// 1 ≤ k ≤ n.
pub fn random_fnc<R: Rng>(rng: &mut R, n: usize, pairs: usize) -> AllianceInstance {
    assert!(n >= 2, "a pair needs two vertices");
    let g = random_graph(rng, n, 0.5);
    let vs = names(n);
    let mut chosen = BTreeSet::new();
    let mut ends = VertexSet::new();
    while chosen.len() < pairs {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            chosen.insert(UnorderedPair::new(vs[a].clone(), vs[b].clone()).expect("distinct"));
            ends.extend([vs[a].clone(), vs[b].clone()]);
        }
    }
    let (forbidden, necessary) = roles(rng, &vs, &ends, true, true);
    let k = rng.gen_range(1..=n);
    let m = mode(rng);
    AllianceInstance::new(g, k, forbidden, necessary, chosen, m).expect("generated instance is valid")
}

/// DA^FN instance on n vertices with at least one necessary vertex.
pub fn random_fn<R: Rng>(rng: &mut R, n: usize) -> AllianceInstance {
    let g = random_graph(rng, n, 0.5);
    let vs = names(n);
    let anchor = vs[rng.gen_range(0..n)].clone();
    let (forbidden, mut necessary) = roles(rng, &vs, &[anchor.clone()].into(), true, true);
    necessary.insert(anchor);
    let k = rng.gen_range(necessary.len()..=n);
    let m = mode(rng);
    AllianceInstance::new(g, k, forbidden, necessary, BTreeSet::new(), m).expect("generated instance is valid")
}

/// DA^F instance (possibly without forbidden vertices) with 1 ≤ k ≤ max_k.
pub fn random_f<R: Rng>(rng: &mut R, n: usize, max_k: usize) -> AllianceInstance {
    let g = random_graph(rng, n, 0.5);
    let vs = names(n);
    let (forbidden, _) = roles(rng, &vs, &VertexSet::new(), true, false);
    let k = rng.gen_range(1..=max_k.max(1));
    let m = mode(rng);
    AllianceInstance::new(g, k, forbidden, VertexSet::new(), BTreeSet::new(), m).expect("generated instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alliance::Variant;

    #[test]
    fn seeds_reproduce() {
        let a = random_mmo(&mut rng(7), &MmoParams::default());
        let b = random_mmo(&mut rng(7), &MmoParams::default());
        assert_eq!(a, b);
        assert_eq!(random_fnc(&mut rng(3), 4, 1), random_fnc(&mut rng(3), 4, 1));
    }

    #[test]
    fn shapes() {
        let mut r = rng(11);
        for _ in 0..50 {
            let m = random_mmo(&mut r, &MmoParams::default());
            assert!(m.graph().vertex_count() <= 4 && (1..=5).contains(&m.graph().edge_count()));
            assert!(m.weights().values().all(|&w| (1..=3).contains(&w)) && (1..=4).contains(&m.r()));
            assert_eq!(random_fnc(&mut r, 3, 1).variant(), Variant::FNC);
            assert_eq!(random_fn(&mut r, 3).variant(), Variant::FN);
            assert!(random_f(&mut r, 4, 2).k() <= 2);
        }
    }
}
