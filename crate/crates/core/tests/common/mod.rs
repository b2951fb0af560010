#![allow(dead_code)]

use std::collections::BTreeSet;

use alliance_core::alliance::is_solution;
use alliance_core::gen;
use alliance_core::reductions::{lift_solution, project_solution, tau_f, tau_fn_auto, tau_fnc};
use alliance_core::solver::{solve, Answer, Goal, SolveRequest};
use alliance_core::treewidth::{heuristic_td, make_nice, transform_td, treewidth_exact_small, validate_td};
use alliance_core::{AllianceInstance, ReductionStage, StageTag, TreeDecomposition, VertexSet};
use rand_chacha::ChaCha8Rng;

pub const SEARCH_BUDGET: usize = 26;

pub fn all_solutions(inst: &AllianceInstance) -> Vec<VertexSet> {
    solutions_with(inst, true)
}

/// Plain enumeration uses the default budget; propagation gets more room.
pub fn solutions_with(inst: &AllianceInstance, propagate: bool) -> Vec<VertexSet> {
    let req = SolveRequest::new(inst, Goal::EnumerateAll).propagate(propagate);
    let req = if propagate { req.budget(SEARCH_BUDGET) } else { req };
    match solve(&req).expect("within budget").answer {
        Answer::EnumerateAll { solutions } => solutions,
        _ => unreachable!(),
    }
}

/// Checks the solution bijection of one stage; returns a description of the
/// first discrepancy.
pub fn audit_stage(stage: &ReductionStage) -> Result<usize, String> {
    audit_stage_with(stage, true)
}

pub fn audit_stage_with(stage: &ReductionStage, propagate_output: bool) -> Result<usize, String> {
    let input = stage.input.as_alliance().ok_or("alliance stage expected")?;
    let ins = solutions_with(input, false);
    let outs = solutions_with(&stage.output, propagate_output);
    if ins.len() != outs.len() {
        return Err(format!("{}: {} input vs {} output solutions", stage.tag, ins.len(), outs.len()));
    }
    let out_set: BTreeSet<&VertexSet> = outs.iter().collect();
    for s in &ins {
        let l = lift_solution(stage, s).map_err(|e| e.to_string())?;
        if !out_set.contains(&l) || !is_solution(&stage.output, &l).unwrap() {
            return Err(format!("{}: lift of {s:?} is not an output solution", stage.tag));
        }
        if l.len() as i64 != stage.size_fn.apply(s.len() as i64) {
            return Err(format!("{}: |lift| = {} but size_fn gives {}", stage.tag, l.len(), stage.size_fn.apply(s.len() as i64)));
        }
        if &project_solution(stage, &l).map_err(|e| e.to_string())? != s {
            return Err(format!("{}: project(lift(S)) != S", stage.tag));
        }
    }
    for t in &outs {
        let p = project_solution(stage, t).map_err(|e| e.to_string())?;
        if &lift_solution(stage, &p).map_err(|e| e.to_string())? != t {
            return Err(format!("{}: lift(project(S')) != S'", stage.tag));
        }
    }
    Ok(ins.len())
}

/// Heuristic decomposition of the input structure, checked against the
/// exact treewidth.
pub fn optimal_td(stage_input: &alliance_core::Graph) -> TreeDecomposition {
    let td = heuristic_td(stage_input);
    assert_eq!(td.width(), treewidth_exact_small(stage_input).unwrap(), "heuristic is not optimal here");
    td
}

/// Builds the stage for `input` together with the decomposition its
/// transform expects.
pub fn stage_with_td(tag: StageTag, input: &AllianceInstance) -> (ReductionStage, TreeDecomposition) {
    let primal = alliance_core::alliance::primal_graph(input);
    let td = heuristic_td(&primal);
    match tag {
        StageTag::Fnc2Fn => (tau_fnc(input).unwrap(), td),
        StageTag::Fn2F => {
            let nice = make_nice(&td);
            (tau_fn_auto(input, Some(&nice)).unwrap(), nice.into_td())
        }
        StageTag::F2Da => (tau_f(input).unwrap(), td),
        StageTag::Mmo2Fnc => panic!("MMO stages are built from MMO instances"),
    }
}

/// Transforms `td` and checks validity and the width bound.
pub fn check_width(stage: &ReductionStage, td: &TreeDecomposition) -> Result<(i64, i64), String> {
    let out = transform_td(stage, td).map_err(|e| e.to_string())?;
    if let alliance_core::treewidth::TdVerdict::Invalid(v) = validate_td(stage.output.graph(), &out) {
        return Err(format!("{}: transformed decomposition invalid: {:?}", stage.tag, &v[..v.len().min(3)]));
    }
    let (w, bound) = (out.width(), stage.tag.width_bound(td.width()));
    if w > bound {
        return Err(format!("{}: width {w} exceeds bound {bound}", stage.tag));
    }
    Ok((w, bound))
}

/// The toy corpus for one stage: instances the audits can enumerate.
pub fn toy_corpus(tag: StageTag, rng: &mut ChaCha8Rng, count: usize) -> Vec<AllianceInstance> {
    let mut out = Vec::new();
    while out.len() < count {
        let inst = match tag {
            StageTag::Fnc2Fn => gen::random_fnc(rng, 2, 1),
            StageTag::Fn2F => {
                let n = 1 + out.len() % 3;
                gen::random_fn(rng, n)
            }
            StageTag::F2Da => {
                let n = 1 + out.len() % 4;
                let inst = gen::random_f(rng, n, 2);
                let free = inst.graph().vertex_count() + inst.forbidden().len() * (1 + 2 * inst.k());
                if free > 22 {
                    continue;
                }
                inst
            }
            StageTag::Mmo2Fnc => panic!("MMO corpus is generated separately"),
        };
        out.push(inst);
    }
    out
}
