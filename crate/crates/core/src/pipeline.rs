//! Runs an MMO instance through a prefix of the reduction chain, carrying a
//! tree decomposition along when one is given, and optionally decides the
//! last instance and maps the witness back to an orientation.
//!
//! Instances grow polynomially but steeply (the FN2F output of a one-edge
//! source already has several hundred thousand vertices), so every stage is
//! first sized by counting; stages above `max_vertices` are reported with
//! their predicted counts instead of being built.

use serde::Serialize;

use crate::alliance::{AllianceInstance, Mode};
use crate::error::{Error, Result};
use crate::mmo::{max_weighted_outdegree, solve_mmo, MmoInstance, MAX_BRUTE_FORCE_EDGES};
use crate::reductions::{
    mmo2fnc_stage, project_solution, s_fn, s_fnc, solution_to_orientation, tau_f, tau_fn_auto, tau_fnc,
    ReductionStage, SizeFn, StageTag,
};
use crate::solver::{solve, Goal, SolveRequest, DEFAULT_BUDGET};
use crate::treewidth::{make_nice, require_valid, transform_td, TreeDecomposition};
use crate::vertex::VertexId;

pub const DEFAULT_MAX_VERTICES: usize = 100_000;

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// A prefix of [`StageTag::CHAIN`].
    pub stages: Vec<StageTag>,
    pub mode: Mode,
    pub decomposition: Option<TreeDecomposition>,
    pub solve: bool,
    pub budget: usize,
    pub propagate: bool,
    pub max_vertices: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            stages: vec![StageTag::Mmo2Fnc],
            mode: Mode::AtMost,
            decomposition: None,
            solve: true,
            budget: DEFAULT_BUDGET,
            propagate: false,
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

/// Sizes of an alliance instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub vertices: usize,
    pub forbidden: usize,
    pub necessary: usize,
    pub pairs: usize,
    pub k: usize,
}

impl Counts {
    pub fn of(inst: &AllianceInstance) -> Self {
        Counts {
            vertices: inst.graph().vertex_count(),
            forbidden: inst.forbidden().len(),
            necessary: inst.necessary().len(),
            pairs: inst.pairs().len(),
            k: inst.k(),
        }
    }

    fn optional(&self) -> usize {
        self.vertices - self.forbidden - self.necessary
    }
}

/// Output sizes of an alliance stage, computed without building it, and its
/// size function.
pub fn predict(tag: StageTag, c: &Counts) -> Result<(Counts, SizeFn)> {
    let n = c.vertices;
    let apply = |f: SizeFn, k: usize| f.apply(k as i64) as usize;
    Ok(match tag {
        StageTag::Mmo2Fnc => return Err(Error::stage(tag.name(), "expects an MMO instance")),
        StageTag::Fnc2Fn => {
            let m = n * n + n;
            let f = s_fnc(n, c.pairs);
            let out = Counts {
                vertices: n + 2 * n * n + c.pairs * (3 + 4 * m),
                forbidden: c.forbidden + n * n + c.pairs * 2 * m,
                necessary: c.necessary + c.pairs,
                pairs: 0,
                k: apply(f, c.k),
            };
            (out, f)
        }
        StageTag::Fn2F => {
            let free = c.optional();
            let plus = (n - c.forbidden) + free;
            let f = s_fn(n, free, c.necessary);
            let out = Counts {
                vertices: n + 2 * (n + 1) * plus + 5 * free,
                forbidden: c.forbidden + (n + 1) * plus + 2 * free,
                necessary: 0,
                pairs: 0,
                k: apply(f, c.k),
            };
            (out, f)
        }
        StageTag::F2Da => {
            let out = Counts { vertices: n + c.forbidden * (1 + 2 * c.k), forbidden: 0, necessary: 0, pairs: 0, k: c.k };
            (out, SizeFn::IDENTITY)
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub stage: StageTag,
    pub materialized: bool,
    #[serde(flatten)]
    pub counts: Counts,
    pub edges: Option<usize>,
    pub size_fn: SizeFn,
    pub width: Option<i64>,
    pub width_bound: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecisionReport {
    pub yes: bool,
    pub free_dimensions: usize,
    pub search_nodes: u64,
    pub witness_size: Option<usize>,
    /// Arcs (tail, head) of the orientation read off the witness.
    pub orientation: Option<Vec<(VertexId, VertexId)>>,
    pub max_outdegree: Option<u64>,
    /// Direct brute-force answer on the source, when small enough.
    pub source_yes: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub source_vertices: usize,
    pub source_edges: usize,
    pub r: u64,
    pub source_width: Option<i64>,
    pub stages: Vec<StageReport>,
    pub decision: Option<DecisionReport>,
    pub budget_exceeded: bool,
    /// Why later stages were only predicted.
    pub truncated: Option<String>,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub report: PipelineReport,
    pub stages: Vec<ReductionStage>,
    /// One per built stage when a source decomposition was given.
    pub decompositions: Vec<TreeDecomposition>,
}

fn check_prefix(stages: &[StageTag]) -> Result<()> {
    if stages.is_empty() || stages.len() > 4 || stages != &StageTag::CHAIN[..stages.len()] {
        return Err(Error::InvalidInstance(
            "stages must be a prefix of MMO2FNC, FNC2FN, FN2F, F2DA".into(),
        ));
    }
    Ok(())
}

pub fn run_pipeline(m: &MmoInstance, opts: &PipelineOptions) -> Result<PipelineRun> {
    check_prefix(&opts.stages)?;
    if let Some(td) = &opts.decomposition {
        require_valid(m.graph(), td, "source decomposition")?;
    }
    let mut report = PipelineReport {
        source_vertices: m.graph().vertex_count(),
        source_edges: m.graph().edge_count(),
        r: m.r(),
        source_width: opts.decomposition.as_ref().map(|td| td.width()),
        stages: Vec::new(),
        decision: None,
        budget_exceeded: false,
        truncated: None,
    };
    let mut stages: Vec<ReductionStage> = Vec::new();
    let mut tds: Vec<TreeDecomposition> = Vec::new();
    let mut td = opts.decomposition.clone();
    let mut predicted: Option<Counts> = None;

    for &tag in &opts.stages {
        let prediction = match (predicted, stages.last()) {
            (Some(c), _) => Some(predict(tag, &c)?),
            (None, Some(prev)) => {
                let (next, size_fn) = predict(tag, &Counts::of(&prev.output))?;
                if next.vertices > opts.max_vertices {
                    report.truncated = Some(format!(
                        "{tag} output would have {} vertices, above the limit of {}",
                        next.vertices, opts.max_vertices
                    ));
                    Some((next, size_fn))
                } else {
                    None
                }
            }
            (None, None) => None,
        };
        if let Some((counts, size_fn)) = prediction {
            report.stages.push(StageReport {
                stage: tag,
                materialized: false,
                counts,
                edges: None,
                size_fn,
                width: None,
                width_bound: None,
            });
            predicted = Some(counts);
            continue;
        }
        let (stage, input_td) = match (tag, stages.last()) {
            (StageTag::Mmo2Fnc, _) => (mmo2fnc_stage(m, opts.mode)?, td.clone()),
            (StageTag::Fn2F, Some(prev)) => match &td {
                Some(t) => {
                    let nice = make_nice(t);
                    (tau_fn_auto(&prev.output, Some(&nice))?, Some(nice.into_td()))
                }
                None => (tau_fn_auto(&prev.output, None)?, None),
            },
            (StageTag::Fnc2Fn, Some(prev)) => (tau_fnc(&prev.output)?, td.clone()),
            (StageTag::F2Da, Some(prev)) => (tau_f(&prev.output)?, td.clone()),
            _ => unreachable!("prefix checked"),
        };
        let (width, width_bound) = match &input_td {
            Some(t) => {
                let out = transform_td(&stage, t)?;
                let w = (out.width(), stage.tag.width_bound(t.width()));
                td = Some(out.clone());
                tds.push(out);
                (Some(w.0), Some(w.1))
            }
            None => (None, None),
        };
        log::info!("{tag}: {} vertices, k = {}", stage.output.graph().vertex_count(), stage.output.k());
        report.stages.push(StageReport {
            stage: tag,
            materialized: true,
            counts: Counts::of(&stage.output),
            edges: Some(stage.output.graph().edge_count()),
            size_fn: stage.size_fn,
            width,
            width_bound,
        });
        stages.push(stage);
    }

    if opts.solve && report.truncated.is_none() {
        let last = &stages.last().expect("at least one stage").output;
        match solve(&SolveRequest::new(last, Goal::Decide).budget(opts.budget).propagate(opts.propagate)) {
            Ok(sol) => {
                let witness = sol.answer.witness().cloned();
                let mut decision = DecisionReport {
                    yes: witness.is_some(),
                    free_dimensions: sol.free_dimensions,
                    search_nodes: sol.search_nodes,
                    witness_size: witness.as_ref().map(|w| w.len()),
                    orientation: None,
                    max_outdegree: None,
                    source_yes: None,
                };
                if let Some(mut s) = witness {
                    for stage in stages[1..].iter().rev() {
                        s = project_solution(stage, &s)?;
                    }
                    let o = solution_to_orientation(m, &s)?;
                    decision.max_outdegree = Some(max_weighted_outdegree(m, &o)?);
                    decision.orientation = Some(o.arcs().map(|(t, h)| (t.clone(), h.clone())).collect());
                }
                if m.graph().edge_count() <= MAX_BRUTE_FORCE_EDGES {
                    decision.source_yes = Some(solve_mmo(m)?.is_some());
                }
                report.decision = Some(decision);
            }
            Err(Error::BudgetExceeded { free, budget }) => {
                log::warn!("final instance has {free} free dimensions, budget {budget}");
                report.budget_exceeded = true;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(PipelineRun { report, stages, decompositions: tds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::heavy_edge_mmo;
    use crate::treewidth::heuristic_td;

    #[test]
    fn heavy_edge_decides() {
        let yes = run_pipeline(&heavy_edge_mmo(3), &PipelineOptions::default()).unwrap();
        let d = yes.report.decision.unwrap();
        assert!(d.yes && d.source_yes == Some(true));
        assert!(d.max_outdegree.unwrap() <= 3);
        let no = run_pipeline(&heavy_edge_mmo(2), &PipelineOptions::default()).unwrap();
        let d = no.report.decision.unwrap();
        assert!(!d.yes && d.source_yes == Some(false));
    }

    #[test]
    fn predictions_match_built_stages() {
        let m = MmoInstance::from_weighted_edges([], [(VertexId::named("a"), VertexId::named("b"), 1)], 1).unwrap();
        let opts = PipelineOptions {
            stages: StageTag::CHAIN.to_vec(),
            solve: false,
            max_vertices: usize::MAX,
            ..Default::default()
        };
        // stop before FN2F so the test stays small
        let small = PipelineOptions { stages: StageTag::CHAIN[..2].to_vec(), ..opts.clone() };
        let run = run_pipeline(&m, &small).unwrap();
        let (c, _) = predict(StageTag::Fnc2Fn, &Counts::of(&run.stages[0].output)).unwrap();
        assert_eq!(c, Counts::of(&run.stages[1].output));

        let capped = PipelineOptions { max_vertices: 10_000, ..opts };
        let run = run_pipeline(&m, &capped).unwrap();
        assert!(run.report.truncated.is_some());
        let ks: Vec<usize> = run.report.stages.iter().map(|s| s.counts.k).collect();
        let k1 = run.report.stages[0].counts.k;
        let n1 = run.report.stages[0].counts.vertices;
        let k2 = s_fnc(n1, 1).apply(k1 as i64) as usize;
        assert_eq!(ks[1], k2);
        assert_eq!(ks[3], ks[2]);
        assert!(!run.report.stages[3].materialized);
    }

    #[test]
    fn widths_are_reported() {
        let m = heavy_edge_mmo(3);
        let td = heuristic_td(m.graph());
        let opts = PipelineOptions { stages: StageTag::CHAIN[..2].to_vec(), decomposition: Some(td), solve: false, ..Default::default() };
        let run = run_pipeline(&m, &opts).unwrap();
        for s in &run.report.stages {
            assert!(s.width.unwrap() <= s.width_bound.unwrap());
        }
        assert_eq!(run.decompositions.len(), 2);
    }

    #[test]
    fn rejects_non_prefix() {
        let opts = PipelineOptions { stages: vec![StageTag::Fnc2Fn], ..Default::default() };
        assert!(run_pipeline(&heavy_edge_mmo(3), &opts).is_err());
    }
}
