//! DA^FNC → DA^FN (τ^FNC): complementary pairs are replaced by gadgets.
//!
//! Names: `v/y{i}`, `v/yf{i}` for the Y chain of v; for a pair {a,b} with
//! a < b, `a.b/tri` is the necessary triangle vertex, `x.o/ph` the hub of
//! side x (o the other endpoint) and `x.o/z{i}`, `x.o/zf{i}` its Z chain.

use std::collections::BTreeMap;

use crate::alliance::{AllianceInstance, Variant};
use crate::error::{Error, Result};
use crate::graph::{UnorderedPair, VertexSet};
use crate::vertex::{Role, VertexId};

use super::{couple, Origin, ReductionStage, SizeFn, StageInput, StageTag};

const STAGE: &str = "FNC2FN";

/// `x ↦ x(n+1) + |C|(n²+n+2)`.
pub fn s_fnc(n: usize, pairs: usize) -> SizeFn {
    let (n, c) = (n as i64, pairs as i64);
    SizeFn { scale: n + 1, offset: c * (n * n + n + 2) }
}

pub(crate) fn y(v: &VertexId, i: usize) -> VertexId {
    v.indexed(Role::ChainY, i as u32)
}

pub(crate) fn yf(v: &VertexId, i: usize) -> VertexId {
    v.indexed(Role::ChainYForbidden, i as u32)
}

pub(crate) fn hub(x: &VertexId, other: &VertexId) -> VertexId {
    x.paired(other, Role::PairHub, None)
}

pub(crate) fn triangle(p: &UnorderedPair) -> VertexId {
    p.first().paired(p.second(), Role::Triangle, None)
}

pub(crate) fn z(x: &VertexId, other: &VertexId, i: usize) -> VertexId {
    x.paired(other, Role::ChainZ, Some(i as u32))
}

pub(crate) fn zf(x: &VertexId, other: &VertexId, i: usize) -> VertexId {
    x.paired(other, Role::ChainZForbidden, Some(i as u32))
}

/// Both sides of a pair as (side, other).
pub(crate) fn sides(p: &UnorderedPair) -> [(&VertexId, &VertexId); 2] {
    [(p.first(), p.second()), (p.second(), p.first())]
}

pub fn tau_fnc(input: &AllianceInstance) -> Result<ReductionStage> {
    if input.variant() != Variant::FNC {
        return Err(Error::stage(STAGE, format!("input must be a DA^FNC instance, got {}", input.variant())));
    }
    let n = input.graph().vertex_count();
    if input.k() > n {
        return Err(Error::stage(
            STAGE,
            format!("k = {} exceeds n = {n}; the size bound no longer separates the two sides of a pair", input.k()),
        ));
    }
    let m = n * n + n;
    let size_fn = s_fnc(n, input.pairs().len());
    let mut g = input.graph().clone();
    let mut forbidden = input.forbidden().clone();
    let mut necessary = input.necessary().clone();
    let mut provenance = BTreeMap::new();

    for v in input.graph().vertices() {
        for i in 1..=n {
            g.add_edge(v.clone(), y(v, i))?;
            g.add_edge(v.clone(), yf(v, i))?;
            forbidden.insert(yf(v, i));
            provenance.insert(y(v, i), Origin::Vertex(v.clone()));
            provenance.insert(yf(v, i), Origin::Vertex(v.clone()));
        }
        for i in 1..n {
            couple(&mut g, &y(v, i), &yf(v, i), &y(v, i + 1), &yf(v, i + 1))?;
        }
    }
    for p in input.pairs() {
        let tri = triangle(p);
        necessary.insert(tri.clone());
        provenance.insert(tri.clone(), Origin::Pair(p.clone()));
        for (x, o) in sides(p) {
            let h = hub(x, o);
            g.add_edge(tri.clone(), h.clone())?;
            provenance.insert(h.clone(), Origin::Pair(p.clone()));
            for i in 1..=m {
                g.add_edge(h.clone(), z(x, o, i))?;
                forbidden.insert(zf(x, o, i));
                provenance.insert(z(x, o, i), Origin::Pair(p.clone()));
                provenance.insert(zf(x, o, i), Origin::Pair(p.clone()));
            }
            couple(&mut g, &y(x, n), &yf(x, n), &z(x, o, 1), &zf(x, o, 1))?;
            for i in 1..m {
                couple(&mut g, &z(x, o, i), &zf(x, o, i), &z(x, o, i + 1), &zf(x, o, i + 1))?;
            }
        }
    }
    let k = size_fn.apply(input.k() as i64) as usize;
    let output = AllianceInstance::new(g, k, forbidden, necessary, Default::default(), input.mode())?;
    Ok(ReductionStage {
        tag: StageTag::Fnc2Fn,
        input: StageInput::Alliance(input.clone()),
        output,
        ordering: None,
        size_fn,
        provenance,
    })
}

pub(crate) fn lift(input: &AllianceInstance, s: &VertexSet) -> VertexSet {
    let n = input.graph().vertex_count();
    let mut out = s.clone();
    for v in s {
        out.extend((1..=n).map(|i| y(v, i)));
    }
    for p in input.pairs() {
        for (x, o) in sides(p) {
            if s.contains(x) {
                out.insert(triangle(p));
                out.insert(hub(x, o));
                out.extend((1..=n * n + n).map(|i| z(x, o, i)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alliance::{is_solution, Mode};
    use crate::graph::Graph;

    fn v(s: &str) -> VertexId {
        VertexId::named(s)
    }

    /// Two adjacent vertices forming a complementary pair.
    fn toy(k: usize) -> AllianceInstance {
        let g = Graph::from_edges([], [(v("a"), v("b"))]).unwrap();
        let pairs = [UnorderedPair::new(v("a"), v("b")).unwrap()].into();
        AllianceInstance::new(g, k, Default::default(), Default::default(), pairs, Mode::AtMost).unwrap()
    }

    #[test]
    fn size_function_values() {
        assert_eq!(s_fnc(2, 1).apply(1), 11);
        assert_eq!(s_fnc(7, 1).apply(3), 82);
    }

    #[test]
    fn toy_shape() {
        let st = tau_fnc(&toy(1)).unwrap();
        let out = &st.output;
        // 2 + 2·2·2 Y vertices + triangle + 2 hubs + 2·2·6 Z vertices
        assert_eq!(out.graph().vertex_count(), 2 + 8 + 3 + 24);
        assert_eq!(out.k(), 11);
        assert_eq!(out.variant(), Variant::FN);
        assert_eq!(out.necessary().len(), 1);
        assert!(out.necessary().contains(&VertexId::from("a.b/tri")));
        assert!(out.graph().has_edge(&"a.b/tri".into(), &"b.a/ph".into()));
        assert!(out.graph().has_edge(&"b/y2".into(), &"b.a/zf1".into()));
    }

    #[test]
    fn lifted_singleton_is_solution() {
        let st = tau_fnc(&toy(1)).unwrap();
        let s: VertexSet = [v("a")].into();
        let lifted = lift(st.input.as_alliance().unwrap(), &s);
        assert_eq!(lifted.len(), 11);
        assert!(is_solution(&st.output, &lifted).unwrap());
    }

    #[test]
    fn rejects_wrong_variant_and_large_k() {
        let g = Graph::from_edges([], [(v("a"), v("b"))]).unwrap();
        let plain = AllianceInstance::plain(g, 1, Mode::AtMost).unwrap();
        assert!(tau_fnc(&plain).is_err());
        assert!(tau_fnc(&toy(3)).is_err());
    }
}
