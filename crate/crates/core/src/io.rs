//! JSON documents for instances and reduction stages, plus the edge-list
//! front end. Serialisation is canonical: sorted collections and pretty
//! printing with a trailing newline, so equal values give equal bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::alliance::{AllianceInstance, Mode};
use crate::error::{Error, Result};
use crate::graph::{Graph, UnorderedPair, VertexSet};
use crate::mmo::MmoInstance;
use crate::reductions::{Origin, ReductionStage, SizeFn, StageInput, StageTag};
use crate::vertex::VertexId;

fn at_most() -> Mode {
    Mode::AtMost
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllianceDoc {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    pub k: usize,
    #[serde(default)]
    pub forbidden: Vec<VertexId>,
    #[serde(default)]
    pub necessary: Vec<VertexId>,
    #[serde(default)]
    pub pairs: Vec<(VertexId, VertexId)>,
    #[serde(default = "at_most")]
    pub mode: Mode,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MmoDoc {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId, u64)>,
    pub r: u64,
}

fn field(name: &str, e: Error) -> Error {
    Error::InvalidInstance(format!("{name}: {e}"))
}

impl AllianceDoc {
    pub fn from_instance(inst: &AllianceInstance) -> Self {
        let g = inst.graph();
        AllianceDoc {
            vertices: g.vertices().cloned().collect(),
            edges: g.edges().map(|e| (e.first().clone(), e.second().clone())).collect(),
            k: inst.k(),
            forbidden: inst.forbidden().iter().cloned().collect(),
            necessary: inst.necessary().iter().cloned().collect(),
            pairs: inst.pairs().iter().map(|p| (p.first().clone(), p.second().clone())).collect(),
            mode: inst.mode(),
        }
    }

    pub fn into_instance(self) -> Result<AllianceInstance> {
        let mut g = Graph::from_edges(self.vertices, []).map_err(|e| field("vertices", e))?;
        for (i, (u, v)) in self.edges.into_iter().enumerate() {
            g.add_edge(u, v).map_err(|e| field(&format!("edges[{i}]"), e))?;
        }
        let known = |name: &str, vs: Vec<VertexId>| -> Result<VertexSet> {
            match vs.iter().find(|v| !g.contains(v)) {
                Some(v) => Err(field(name, Error::UnknownVertex(v.clone()))),
                None => Ok(vs.into_iter().collect()),
            }
        };
        let forbidden = known("forbidden", self.forbidden)?;
        let necessary = known("necessary", self.necessary)?;
        let mut pairs = std::collections::BTreeSet::new();
        for (i, (a, b)) in self.pairs.into_iter().enumerate() {
            pairs.insert(UnorderedPair::new(a, b).map_err(|e| field(&format!("pairs[{i}]"), e))?);
        }
        AllianceInstance::new(g, self.k, forbidden, necessary, pairs, self.mode)
    }
}

impl MmoDoc {
    pub fn from_instance(m: &MmoInstance) -> Self {
        MmoDoc {
            vertices: m.graph().vertices().cloned().collect(),
            edges: m.weights().iter().map(|(e, &w)| (e.first().clone(), e.second().clone(), w)).collect(),
            r: m.r(),
        }
    }

    pub fn into_instance(self) -> Result<MmoInstance> {
        MmoInstance::from_weighted_edges(self.vertices, self.edges, self.r)
    }
}

/// Either kind of instance file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyInstance {
    Alliance(AllianceInstance),
    Mmo(MmoInstance),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    EdgeList,
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialise");
    s.push('\n');
    s
}

pub fn alliance_to_json(inst: &AllianceInstance) -> String {
    pretty(&AllianceDoc::from_instance(inst))
}

pub fn mmo_to_json(m: &MmoInstance) -> String {
    pretty(&MmoDoc::from_instance(m))
}

pub fn alliance_from_json(text: &str) -> Result<AllianceInstance> {
    serde_json::from_str::<AllianceDoc>(text)?.into_instance()
}

pub fn mmo_from_json(text: &str) -> Result<MmoInstance> {
    serde_json::from_str::<MmoDoc>(text)?.into_instance()
}

/// Reads either schema; an `r` field marks an MMO instance.
pub fn parse_json_instance(text: &str) -> Result<AnyInstance> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("r").is_some() {
        Ok(AnyInstance::Mmo(serde_json::from_value::<MmoDoc>(value)?.into_instance()?))
    } else {
        Ok(AnyInstance::Alliance(serde_json::from_value::<AllianceDoc>(value)?.into_instance()?))
    }
}

/// Edge lists only carry a graph, so `k` must be supplied for them.
pub fn parse_instance(text: &str, format: Format, k: Option<usize>, mode: Mode) -> Result<AnyInstance> {
    match format {
        Format::Json => parse_json_instance(text),
        Format::EdgeList => {
            let k = k.ok_or_else(|| Error::InvalidInstance("an edge-list instance needs k".into()))?;
            Ok(AnyInstance::Alliance(AllianceInstance::plain(Graph::parse_edge_list(text)?, k, mode)?))
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StageInputDoc {
    Mmo(MmoDoc),
    Alliance(AllianceDoc),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageDoc {
    pub stage: StageTag,
    pub input: StageInputDoc,
    pub output: AllianceDoc,
    pub ordering: Option<Vec<VertexId>>,
    pub size_fn: SizeFn,
    pub provenance: BTreeMap<VertexId, Origin>,
}

impl StageDoc {
    pub fn from_stage(stage: &ReductionStage) -> Self {
        StageDoc {
            stage: stage.tag,
            input: match &stage.input {
                StageInput::Mmo(m) => StageInputDoc::Mmo(MmoDoc::from_instance(m)),
                StageInput::Alliance(i) => StageInputDoc::Alliance(AllianceDoc::from_instance(i)),
            },
            output: AllianceDoc::from_instance(&stage.output),
            ordering: stage.ordering.clone(),
            size_fn: stage.size_fn,
            provenance: stage.provenance.clone(),
        }
    }

    pub fn into_stage(self) -> Result<ReductionStage> {
        Ok(ReductionStage {
            tag: self.stage,
            input: match self.input {
                StageInputDoc::Mmo(m) => StageInput::Mmo(m.into_instance()?),
                StageInputDoc::Alliance(a) => StageInput::Alliance(a.into_instance()?),
            },
            output: self.output.into_instance()?,
            ordering: self.ordering,
            size_fn: self.size_fn,
            provenance: self.provenance,
        })
    }
}

pub fn stage_to_json(stage: &ReductionStage) -> String {
    pretty(&StageDoc::from_stage(stage))
}

pub fn stage_from_json(text: &str) -> Result<ReductionStage> {
    serde_json::from_str::<StageDoc>(text)?.into_stage()
}
