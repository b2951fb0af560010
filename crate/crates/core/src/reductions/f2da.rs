//! DA^F → DA (τ^F): every forbidden f gets a fan hub `f/fh` and 2k leaves
//! `f/fl{i}` adjacent to both f and the hub. Solutions are unchanged.

use std::collections::BTreeMap;

use crate::alliance::{AllianceInstance, Variant};
use crate::error::{Error, Result};
use crate::vertex::{Role, VertexId};

use super::{Origin, ReductionStage, SizeFn, StageInput, StageTag};

const STAGE: &str = "F2DA";

pub(crate) fn fan_hub(f: &VertexId) -> VertexId {
    f.tagged(Role::FanHub)
}

pub(crate) fn fan_leaf(f: &VertexId, i: usize) -> VertexId {
    f.indexed(Role::FanLeaf, i as u32)
}

pub fn tau_f(input: &AllianceInstance) -> Result<ReductionStage> {
    if !matches!(input.variant(), Variant::F | Variant::Plain) {
        return Err(Error::stage(STAGE, format!("input must be a DA^F instance, got {}", input.variant())));
    }
    let mut g = input.graph().clone();
    let mut provenance = BTreeMap::new();
    for f in input.forbidden() {
        let hub = fan_hub(f);
        g.add_vertex(hub.clone());
        provenance.insert(hub.clone(), Origin::Vertex(f.clone()));
        for i in 1..=2 * input.k() {
            let leaf = fan_leaf(f, i);
            g.add_edge(f.clone(), leaf.clone())?;
            g.add_edge(hub.clone(), leaf.clone())?;
            provenance.insert(leaf, Origin::Vertex(f.clone()));
        }
    }
    let output = AllianceInstance::plain(g, input.k(), input.mode())?;
    Ok(ReductionStage {
        tag: StageTag::F2Da,
        input: StageInput::Alliance(input.clone()),
        output,
        ordering: None,
        size_fn: SizeFn::IDENTITY,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alliance::Mode;
    use crate::graph::Graph;

    fn v(s: &str) -> VertexId {
        VertexId::named(s)
    }

    #[test]
    fn one_forbidden_vertex() {
        let g = Graph::from_edges([], [(v("a"), v("b")), (v("b"), v("c"))]).unwrap();
        let i = AllianceInstance::new(g, 2, [v("b")].into(), Default::default(), Default::default(), Mode::AtMost).unwrap();
        let st = tau_f(&i).unwrap();
        assert_eq!(st.output.graph().vertex_count(), 3 + 5);
        assert_eq!(st.output.graph().edge_count(), 2 + 8);
        assert_eq!(st.output.variant(), Variant::Plain);
        assert_eq!(st.output.k(), 2);
        assert_eq!(st.output.graph().neighbors(&"b/fl3".into()).unwrap().len(), 2);
    }

    #[test]
    fn plain_input_is_unchanged() {
        let g = Graph::from_edges([], [(v("a"), v("b"))]).unwrap();
        let i = AllianceInstance::plain(g, 1, Mode::AtMost).unwrap();
        let st = tau_f(&i).unwrap();
        assert_eq!(st.output.graph(), i.graph());
        assert!(st.provenance.is_empty());
    }

    #[test]
    fn rejects_necessary() {
        let g = Graph::from_edges([], [(v("a"), v("b"))]).unwrap();
        let i = AllianceInstance::new(g, 1, Default::default(), [v("a")].into(), Default::default(), Mode::AtMost).unwrap();
        assert!(tau_f(&i).is_err());
    }
}
