mod common;

use alliance_core::gen::{self, MmoParams};
use alliance_core::reductions::{mmo2fnc_stage, tau_fn};
use alliance_core::samples::{diamond_graph, diamond_nice_td, heavy_edge_mmo};
use alliance_core::treewidth::{
    heuristic_td, make_nice, postorder_ordering, transform_td, treewidth_exact_small, validate_td, TdVerdict,
};
use alliance_core::{Mode, StageTag, TreeDecomposition, VertexSet};

use common::{check_width, optimal_td, stage_with_td, toy_corpus};

#[test]
fn mmo_transform_on_random_sources() {
    let mut rng = gen::rng(11);
    for _ in 0..40 {
        let m = gen::random_mmo(&mut rng, &MmoParams::default());
        let td = optimal_td(m.graph());
        let stage = mmo2fnc_stage(&m, Mode::AtMost).unwrap();
        check_width(&stage, &td).unwrap();
    }
    let m = heavy_edge_mmo(3);
    let stage = mmo2fnc_stage(&m, Mode::AtMost).unwrap();
    let (w, bound) = check_width(&stage, &heuristic_td(m.graph())).unwrap();
    assert!(w <= bound && bound == 5);
}

#[test]
fn alliance_transforms_on_toys() {
    let mut rng = gen::rng(12);
    for tag in [StageTag::Fnc2Fn, StageTag::Fn2F, StageTag::F2Da] {
        for inst in toy_corpus(tag, &mut rng, 10) {
            let (stage, td) = stage_with_td(tag, &inst);
            if let Err(e) = check_width(&stage, &td) {
                panic!("{e}\ninput: {}", alliance_core::io::alliance_to_json(&inst));
            }
        }
    }
}

#[test]
fn fn2f_transform_needs_matching_ordering() {
    let mut rng = gen::rng(13);
    let inst = loop {
        let i = gen::random_fn(&mut rng, 3);
        if i.allowed().count() >= 2 {
            break i;
        }
    };
    let (stage, td) = stage_with_td(StageTag::Fn2F, &inst);
    let mut reversed = stage.ordering.clone().unwrap();
    reversed.reverse();
    let other = tau_fn(&inst, reversed).unwrap();
    assert!(transform_td(&other, &td).is_err());
    // not nice
    let raw = heuristic_td(&alliance_core::alliance::primal_graph(&inst));
    if raw != td {
        assert!(transform_td(&stage, &raw).is_err());
    }
}

#[test]
fn invalid_input_decomposition_is_rejected() {
    let m = heavy_edge_mmo(3);
    let stage = mmo2fnc_stage(&m, Mode::AtMost).unwrap();
    let bad = TreeDecomposition::single(VertexSet::new());
    assert!(transform_td(&stage, &bad).is_err());
}

#[test]
fn nice_conversion_on_random_graphs() {
    let mut rng = gen::rng(14);
    for n in 1..=10 {
        let g = gen::random_graph(&mut rng, n, 0.4);
        let td = heuristic_td(&g);
        let nice = make_nice(&td);
        assert!(validate_td(&g, nice.td()).is_valid());
        assert_eq!(nice.td().width(), td.width());
        assert!(treewidth_exact_small(&g).unwrap() <= td.width());
        let all: VertexSet = g.vertices().cloned().collect();
        let order = postorder_ordering(&nice, &all).unwrap();
        assert_eq!(order.len(), n);
    }
}

#[test]
fn diamond_reference() {
    let g = diamond_graph();
    assert_eq!(validate_td(&g, &diamond_nice_td()), TdVerdict::Valid);
    assert_eq!(treewidth_exact_small(&g).unwrap(), 2);
    assert_eq!(heuristic_td(&g).width(), 2);
    let text = diamond_nice_td().to_text(None);
    assert_eq!(TreeDecomposition::parse_text(&text).unwrap(), diamond_nice_td());
}
