//! The reduction chain MMO → DA^FNC → DA^FN → DA^F → DA.
//!
//! Each stage records its input, its output instance, the affine map on
//! solution sizes, and where every gadget vertex came from. Lifting a
//! solution through a stage and projecting back are mutually inverse on
//! solution sets.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alliance::{is_solution, AllianceInstance};
use crate::error::{Error, Result};
use crate::graph::{Graph, UnorderedPair, VertexSet};
use crate::mmo::MmoInstance;
use crate::vertex::VertexId;

pub(crate) mod f2da;
pub(crate) mod fn2f;
pub(crate) mod fnc2fn;
pub(crate) mod mmo2fnc;

pub use f2da::tau_f;
pub use fn2f::{s_fn, tau_fn, tau_fn_auto};
pub use fnc2fn::{s_fnc, tau_fnc};
pub use mmo2fnc::{mmo2fnc_stage, orientation_to_solution, reduce_mmo_to_dafnc, solution_to_orientation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StageTag {
    #[serde(rename = "MMO2FNC")]
    Mmo2Fnc,
    #[serde(rename = "FNC2FN")]
    Fnc2Fn,
    #[serde(rename = "FN2F")]
    Fn2F,
    #[serde(rename = "F2DA")]
    F2Da,
}

impl StageTag {
    pub const CHAIN: [StageTag; 4] = [StageTag::Mmo2Fnc, StageTag::Fnc2Fn, StageTag::Fn2F, StageTag::F2Da];

    pub fn name(self) -> &'static str {
        match self {
            StageTag::Mmo2Fnc => "MMO2FNC",
            StageTag::Fnc2Fn => "FNC2FN",
            StageTag::Fn2F => "FN2F",
            StageTag::F2Da => "F2DA",
        }
    }

    /// Additive width bound of the decomposition transform as a function of
    /// the input width.
    pub fn width_bound(self, w: i64) -> i64 {
        match self {
            StageTag::Mmo2Fnc => w + 4,
            StageTag::Fnc2Fn => 3 * w + 5,
            StageTag::Fn2F => w + 13,
            StageTag::F2Da => w + 2,
        }
    }
}

impl fmt::Display for StageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StageTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StageTag::CHAIN
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInstance(format!("unknown stage `{s}` (expected MMO2FNC, FNC2FN, FN2F or F2DA)")))
    }
}

/// `x ↦ scale·x + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeFn {
    pub scale: i64,
    pub offset: i64,
}

impl SizeFn {
    pub const IDENTITY: SizeFn = SizeFn { scale: 1, offset: 0 };

    pub fn apply(&self, x: i64) -> i64 {
        self.scale * x + self.offset
    }

    /// Inverse image of `y`, if there is one.
    pub fn invert(&self, y: i64) -> Option<i64> {
        let d = y - self.offset;
        (d % self.scale == 0).then_some(d / self.scale)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageInput {
    Mmo(MmoInstance),
    Alliance(AllianceInstance),
}

impl StageInput {
    pub fn as_alliance(&self) -> Option<&AllianceInstance> {
        match self {
            StageInput::Alliance(i) => Some(i),
            StageInput::Mmo(_) => None,
        }
    }

    pub fn as_mmo(&self) -> Option<&MmoInstance> {
        match self {
            StageInput::Mmo(m) => Some(m),
            StageInput::Alliance(_) => None,
        }
    }
}

/// What a gadget vertex was built for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Vertex(VertexId),
    Edge(UnorderedPair),
    Pair(UnorderedPair),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStage {
    pub tag: StageTag,
    pub input: StageInput,
    pub output: AllianceInstance,
    /// Ordering of non-forbidden input vertices (FN2F only).
    pub ordering: Option<Vec<VertexId>>,
    pub size_fn: SizeFn,
    /// Gadget vertex → origin; input vertices are not listed.
    pub provenance: BTreeMap<VertexId, Origin>,
}

impl ReductionStage {
    /// Graph the input decomposition must cover: the MMO graph, or the
    /// primal graph of an alliance input.
    pub fn input_structure(&self) -> Graph {
        match &self.input {
            StageInput::Mmo(m) => m.graph().clone(),
            StageInput::Alliance(i) => crate::alliance::primal_graph(i),
        }
    }

    fn alliance_input(&self) -> Result<&AllianceInstance> {
        self.input
            .as_alliance()
            .ok_or_else(|| Error::stage(self.tag.name(), "solutions of an MMO input are orientations; use the orientation maps"))
    }
}

/// Adds `u ⊕ v`: the edges (u,v), (u,u□), (v,v□), (u,v□), (v,u□).
pub(crate) fn couple(g: &mut Graph, u: &VertexId, us: &VertexId, v: &VertexId, vs: &VertexId) -> Result<()> {
    for (x, y) in [(u, v), (u, us), (v, vs), (u, vs), (v, us)] {
        g.add_edge(x.clone(), y.clone())?;
    }
    Ok(())
}

/// Maps a solution of the stage input to the corresponding solution of the
/// output.
pub fn lift_solution(stage: &ReductionStage, s: &VertexSet) -> Result<VertexSet> {
    let input = stage.alliance_input()?;
    if !is_solution(input, s)? {
        return Err(Error::stage(stage.tag.name(), "set to lift is not a solution of the stage input"));
    }
    let lifted = match stage.tag {
        StageTag::Fnc2Fn => fnc2fn::lift(input, s),
        StageTag::Fn2F => fn2f::lift(input, s),
        StageTag::F2Da => s.clone(),
        StageTag::Mmo2Fnc => unreachable!("MMO input handled above"),
    };
    debug_assert_eq!(lifted.len() as i64, stage.size_fn.apply(s.len() as i64));
    Ok(lifted)
}

/// Maps a solution of the stage output back to the input: `S' ∩ V(G)`.
pub fn project_solution(stage: &ReductionStage, s: &VertexSet) -> Result<VertexSet> {
    let input = stage.alliance_input()?;
    if !is_solution(&stage.output, s)? {
        return Err(Error::stage(stage.tag.name(), "set to project is not a solution of the stage output"));
    }
    let projected: VertexSet = s.iter().filter(|v| input.graph().contains(v)).cloned().collect();
    if !is_solution(input, &projected)? {
        return Err(Error::stage(stage.tag.name(), "projection is not a solution of the stage input"));
    }
    Ok(projected)
}

/// Runs the next stage of the chain on an alliance instance.
pub fn apply_stage(tag: StageTag, input: &AllianceInstance, ordering: Option<Vec<VertexId>>) -> Result<ReductionStage> {
    match tag {
        StageTag::Mmo2Fnc => Err(Error::stage(tag.name(), "expects an MMO instance")),
        StageTag::Fnc2Fn => tau_fnc(input),
        StageTag::Fn2F => match ordering {
            Some(o) => tau_fn(input, o),
            None => tau_fn_auto(input, None),
        },
        StageTag::F2Da => tau_f(input),
    }
}
