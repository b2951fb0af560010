//! DA^FN → DA^F (τ^FN): necessary vertices are eliminated.
//!
//! V○ are the vertices that are neither forbidden nor necessary. Each
//! v ∈ V○ gets a primed copy `v/pr` and the g/h gadget `v/gv`, `v/gvf`,
//! `v/hv`, `v/hvf`. Every vertex of V⁺ = V△ ∪ V○ ∪ {v'} gets an A chain
//! `x/a{i}`, `x/af{i}` of length n+1. The A chains of the p-images
//! (v for necessary v, v' otherwise) are linked in the given ordering.

use std::collections::BTreeMap;

use crate::alliance::{AllianceInstance, Variant};
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::treewidth::{postorder_ordering, NiceTreeDecomposition};
use crate::vertex::{Role, VertexId};

use super::{couple, Origin, ReductionStage, SizeFn, StageInput, StageTag};

const STAGE: &str = "FN2F";

/// `x ↦ (n+3)(x + |V○|) − |V△|`.
pub fn s_fn(n: usize, free: usize, necessary: usize) -> SizeFn {
    let n = n as i64;
    SizeFn { scale: n + 3, offset: (n + 3) * free as i64 - necessary as i64 }
}

pub(crate) fn a(v: &VertexId, i: usize) -> VertexId {
    v.indexed(Role::AChain, i as u32)
}

pub(crate) fn af(v: &VertexId, i: usize) -> VertexId {
    v.indexed(Role::AChainForbidden, i as u32)
}

pub(crate) fn primed(v: &VertexId) -> VertexId {
    v.tagged(Role::Primed)
}

pub(crate) fn gv(v: &VertexId) -> VertexId {
    v.tagged(Role::G)
}

pub(crate) fn gvf(v: &VertexId) -> VertexId {
    v.tagged(Role::GForbidden)
}

pub(crate) fn hv(v: &VertexId) -> VertexId {
    v.tagged(Role::H)
}

pub(crate) fn hvf(v: &VertexId) -> VertexId {
    v.tagged(Role::HForbidden)
}

/// Non-forbidden, non-necessary vertices.
pub(crate) fn free_vertices(input: &AllianceInstance) -> VertexSet {
    input.optional().cloned().collect()
}

/// v for necessary v, v' otherwise.
pub(crate) fn p_image(input: &AllianceInstance, v: &VertexId) -> VertexId {
    if input.necessary().contains(v) {
        v.clone()
    } else {
        primed(v)
    }
}

/// V⁺ in a fixed order: each vertex followed by its primed copy.
pub(crate) fn v_plus(input: &AllianceInstance) -> Vec<VertexId> {
    let mut out = Vec::new();
    for v in input.allowed() {
        out.push(v.clone());
        if !input.necessary().contains(v) {
            out.push(primed(v));
        }
    }
    out
}

fn check_input(input: &AllianceInstance) -> Result<()> {
    if !input.pairs().is_empty() || input.variant() != Variant::FN {
        return Err(Error::stage(STAGE, format!("input must be a DA^FN instance, got {}", input.variant())));
    }
    if input.k() == 0 {
        return Err(Error::stage(STAGE, "k must be positive"));
    }
    Ok(())
}

fn check_ordering(input: &AllianceInstance, ordering: &[VertexId]) -> Result<()> {
    let expected: VertexSet = input.allowed().cloned().collect();
    let given: VertexSet = ordering.iter().cloned().collect();
    if given.len() != ordering.len() || given != expected {
        return Err(Error::stage(STAGE, "ordering must be a permutation of the non-forbidden vertices"));
    }
    Ok(())
}

pub fn tau_fn(input: &AllianceInstance, ordering: Vec<VertexId>) -> Result<ReductionStage> {
    check_input(input)?;
    check_ordering(input, &ordering)?;
    let n = input.graph().vertex_count();
    let free = free_vertices(input);
    let size_fn = s_fn(n, free.len(), input.necessary().len());
    let mut g = input.graph().clone();
    let mut forbidden = input.forbidden().clone();
    let mut provenance = BTreeMap::new();
    let mut note = |x: VertexId, origin: &VertexId| {
        provenance.insert(x, Origin::Vertex(origin.clone()));
    };

    for x in v_plus(input) {
        let origin = x.base().filter(|_| x.role() == Role::Primed).unwrap_or(&x).clone();
        for i in 1..=n + 1 {
            g.add_edge(x.clone(), a(&x, i))?;
            g.add_edge(x.clone(), af(&x, i))?;
            forbidden.insert(af(&x, i));
            note(a(&x, i), &origin);
            note(af(&x, i), &origin);
        }
        for i in 1..=n {
            couple(&mut g, &a(&x, i), &af(&x, i), &a(&x, i + 1), &af(&x, i + 1))?;
        }
    }
    for w in ordering.windows(2) {
        let (pu, pv) = (p_image(input, &w[0]), p_image(input, &w[1]));
        couple(&mut g, &a(&pu, n + 1), &af(&pu, n + 1), &a(&pv, 1), &af(&pv, 1))?;
    }
    for v in &free {
        couple(&mut g, &a(v, n + 1), &af(v, n + 1), &gv(v), &gvf(v))?;
        let (p, g_, h) = (primed(v), gv(v), hv(v));
        for (x, y) in [(&p, &g_), (&p, &h), (&g_, &h), (&g_, &hvf(v))] {
            g.add_edge(x.clone(), y.clone())?;
        }
        forbidden.insert(gvf(v));
        forbidden.insert(hvf(v));
        for x in [p, g_, h, gvf(v), hvf(v)] {
            note(x, v);
        }
    }
    let k = size_fn.apply(input.k() as i64) as usize;
    let output = AllianceInstance::new(g, k, forbidden, Default::default(), Default::default(), input.mode())?;
    Ok(ReductionStage {
        tag: StageTag::Fn2F,
        input: StageInput::Alliance(input.clone()),
        output,
        ordering: Some(ordering),
        size_fn,
        provenance,
    })
}

/// τ^FN with the post-order ordering of `td` if given, sorted order
/// otherwise. Correctness does not depend on the ordering; the width bound
/// of the decomposition transform does.
pub fn tau_fn_auto(input: &AllianceInstance, td: Option<&NiceTreeDecomposition>) -> Result<ReductionStage> {
    let eligible: VertexSet = input.allowed().cloned().collect();
    let ordering = match td {
        Some(td) => postorder_ordering(td, &eligible)?,
        None => eligible.into_iter().collect(),
    };
    tau_fn(input, ordering)
}

pub(crate) fn lift(input: &AllianceInstance, s: &VertexSet) -> VertexSet {
    let n = input.graph().vertex_count();
    let mut out = s.clone();
    for v in s {
        out.extend((1..=n + 1).map(|i| a(v, i)));
    }
    for v in free_vertices(input) {
        let p = primed(&v);
        out.extend((1..=n + 1).map(|i| a(&p, i)));
        out.insert(p);
        out.insert(hv(&v));
        if s.contains(&v) {
            out.insert(gv(&v));
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

    /// a free, b necessary, adjacent.
    fn toy() -> AllianceInstance {
        let g = Graph::from_edges([], [(v("a"), v("b"))]).unwrap();
        AllianceInstance::new(g, 2, Default::default(), [v("b")].into(), Default::default(), Mode::AtMost).unwrap()
    }

    #[test]
    fn size_function_value() {
        assert_eq!(s_fn(2, 1, 1).apply(2), 14);
        assert_eq!(s_fn(2, 1, 1).apply(1), 9);
    }

    #[test]
    fn toy_shape() {
        let st = tau_fn(&toy(), vec![v("a"), v("b")]).unwrap();
        let out = &st.output;
        // a, b, a', g/h gadget (4) and three A chains of 2·3 vertices
        assert_eq!(out.graph().vertex_count(), 2 + 1 + 4 + 18);
        assert_eq!(out.variant(), Variant::F);
        assert_eq!(out.k(), 14);
        // p(a) = a', p(b) = b, linked a'_3 ⊕ b_1
        assert!(out.graph().has_edge(&"(a/pr)/a3".into(), &"b/a1".into()));
        assert!(out.graph().has_edge(&"(a/pr)/af3".into(), &"b/a1".into()));
        assert!(!out.graph().has_edge(&"a/a3".into(), &"b/a1".into()));
        assert!(out.graph().has_edge(&"a/gv".into(), &"a/hvf".into()));
        assert!(!out.graph().has_edge(&"a/hv".into(), &"a/hvf".into()));
    }

    #[test]
    fn lift_sizes() {
        let st = tau_fn(&toy(), vec![v("b"), v("a")]).unwrap();
        let input = toy();
        for s in [VertexSet::from([v("b")]), VertexSet::from([v("a"), v("b")])] {
            let l = lift(&input, &s);
            assert_eq!(l.len() as i64, st.size_fn.apply(s.len() as i64));
            assert!(is_solution(&st.output, &l).unwrap());
        }
    }

    #[test]
    fn ordering_must_be_a_permutation() {
        assert!(tau_fn(&toy(), vec![v("a")]).is_err());
        assert!(tau_fn(&toy(), vec![v("a"), v("a"), v("b")]).is_err());
    }

    #[test]
    fn needs_a_necessary_vertex() {
        let g = Graph::from_edges([], [(v("a"), v("b"))]).unwrap();
        let plain = AllianceInstance::plain(g, 2, Mode::AtMost).unwrap();
        assert!(tau_fn(&plain, vec![v("a"), v("b")]).is_err());
    }
}
