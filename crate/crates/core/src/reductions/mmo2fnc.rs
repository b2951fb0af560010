//! MMO → DA^FNC.
//!
//! Every source vertex v becomes necessary together with 2r−1 helpers
//! `v/h{i}`. An edge {u,v} of weight w gets copies `u.v/ec{i}` (adjacent to
//! u), `v.u/ec{i}` (adjacent to v) and forbidden twins `…/ecf{i}`. The pairs
//! (u^v_i, v^u_i) and (v^u_i, u^v_{i+1}) force one side of copies in
//! wholesale; taking `v.u/ec*` means the edge is oriented u → v.

use std::collections::BTreeMap;

use crate::alliance::{AllianceInstance, Mode};
use crate::error::{Error, Result};
use crate::graph::{Graph, UnorderedPair, VertexSet};
use crate::mmo::{MmoInstance, Orientation};
use crate::vertex::{Role, VertexId};

use super::{Origin, ReductionStage, SizeFn, StageInput, StageTag};

const STAGE: &str = "MMO2FNC";

pub(crate) fn copy(x: &VertexId, towards: &VertexId, i: u64) -> VertexId {
    x.paired(towards, Role::EdgeCopy, Some(i as u32))
}

pub(crate) fn forbidden_copy(x: &VertexId, towards: &VertexId, i: u64) -> VertexId {
    x.paired(towards, Role::EdgeCopyForbidden, Some(i as u32))
}

pub(crate) fn helpers(m: &MmoInstance, v: &VertexId) -> impl Iterator<Item = VertexId> {
    let v = v.clone();
    (1..2 * m.r()).map(move |i| v.indexed(Role::Helper, i as u32))
}

fn build(m: &MmoInstance, mode: Mode) -> Result<(AllianceInstance, BTreeMap<VertexId, Origin>)> {
    let mut g = Graph::new();
    let mut necessary = VertexSet::new();
    let mut forbidden = VertexSet::new();
    let mut pairs = std::collections::BTreeSet::new();
    let mut provenance = BTreeMap::new();

    for v in m.graph().vertices() {
        g.add_vertex(v.clone());
        necessary.insert(v.clone());
        for h in helpers(m, v) {
            g.add_edge(v.clone(), h.clone())?;
            necessary.insert(h.clone());
            provenance.insert(h, Origin::Vertex(v.clone()));
        }
    }
    let mut total = 0u64;
    for (e, &w) in m.weights() {
        total += w;
        let (u, v) = (e.first(), e.second());
        for i in 1..=w {
            for (x, y) in [(u, v), (v, u)] {
                let c = copy(x, y, i);
                let cf = forbidden_copy(x, y, i);
                g.add_edge(x.clone(), c.clone())?;
                g.add_edge(x.clone(), cf.clone())?;
                forbidden.insert(cf.clone());
                provenance.insert(c, Origin::Edge(e.clone()));
                provenance.insert(cf, Origin::Edge(e.clone()));
            }
            pairs.insert(UnorderedPair::new(copy(u, v, i), copy(v, u, i))?);
            if i < w {
                pairs.insert(UnorderedPair::new(copy(v, u, i), copy(u, v, i + 1))?);
            }
        }
    }
    let k = necessary.len() + total as usize;
    let inst = AllianceInstance::new(g, k, forbidden, necessary, pairs, mode)?;
    Ok((inst, provenance))
}

/// Builds the DA^FNC instance. Every solution of it has exactly k elements,
/// so both modes have the same solutions.
pub fn reduce_mmo_to_dafnc(m: &MmoInstance, mode: Mode) -> Result<AllianceInstance> {
    Ok(build(m, mode)?.0)
}

pub fn mmo2fnc_stage(m: &MmoInstance, mode: Mode) -> Result<ReductionStage> {
    let (output, provenance) = build(m, mode)?;
    Ok(ReductionStage {
        tag: StageTag::Mmo2Fnc,
        input: StageInput::Mmo(m.clone()),
        output,
        ordering: None,
        size_fn: SizeFn::IDENTITY,
        provenance,
    })
}

/// Necessary vertices plus, for every arc u → v, the copies `v.u/ec*`.
pub fn orientation_to_solution(m: &MmoInstance, o: &Orientation) -> Result<VertexSet> {
    o.check_covers(m)?;
    let mut s = VertexSet::new();
    for v in m.graph().vertices() {
        s.insert(v.clone());
        s.extend(helpers(m, v));
    }
    for (e, &w) in m.weights() {
        let tail = o.tail(e).expect("covered");
        let head = e.other(tail).expect("tail is an endpoint");
        s.extend((1..=w).map(|i| copy(head, tail, i)));
    }
    Ok(s)
}

/// Edge {u,v} is oriented u → v iff all of `v.u/ec*` are in `s`.
pub fn solution_to_orientation(m: &MmoInstance, s: &VertexSet) -> Result<Orientation> {
    let mut o = Orientation::new();
    for (e, &w) in m.weights() {
        let (u, v) = (e.first(), e.second());
        let all = |x: &VertexId, y: &VertexId| (1..=w).all(|i| s.contains(&copy(x, y, i)));
        let none = |x: &VertexId, y: &VertexId| (1..=w).all(|i| !s.contains(&copy(x, y, i)));
        if all(v, u) && none(u, v) {
            o.orient(u.clone(), v.clone())?;
        } else if all(u, v) && none(v, u) {
            o.orient(v.clone(), u.clone())?;
        } else {
            return Err(Error::stage(
                STAGE,
                format!("edge ({u}, {v}): neither side of the copies is fully in the set"),
            ));
        }
    }
    Ok(o)
}
