//! Exhaustive solvers for every alliance variant.
//!
//! The search runs over free dimensions only: necessary vertices are fixed
//! in, forbidden ones fixed out, and every connected component of the pair
//! graph is 2-coloured so that it contributes a single binary choice. With
//! propagation on, a DPLL-style search replaces plain enumeration; it fixes
//! whole gadget blocks at once and returns exactly the same answers.
//!
//! Witnesses are canonical: the smallest solution in (size, lexicographic)
//! order, for both `Decide` and `Minimum`.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::alliance::{AllianceInstance, Mode, Variant};
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::vertex::VertexId;

pub const DEFAULT_BUDGET: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Goal {
    Decide,
    Minimum,
    EnumerateAll,
    Count,
}

impl std::str::FromStr for Goal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decide" => Ok(Goal::Decide),
            "minimum" => Ok(Goal::Minimum),
            "enumerate-all" | "all" => Ok(Goal::EnumerateAll),
            "count" => Ok(Goal::Count),
            _ => Err(Error::InvalidInstance(format!("unknown goal `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveRequest<'a> {
    pub instance: &'a AllianceInstance,
    pub goal: Goal,
    /// Cap on free dimensions for plain enumeration. With propagation the
    /// search may visit at most 2^budget nodes instead.
    pub budget: usize,
    pub propagate: bool,
}

impl<'a> SolveRequest<'a> {
    pub fn new(instance: &'a AllianceInstance, goal: Goal) -> Self {
        SolveRequest { instance, goal, budget: DEFAULT_BUDGET, propagate: false }
    }

    pub fn budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn propagate(mut self, on: bool) -> Self {
        self.propagate = on;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "goal")]
pub enum Answer {
    Decide { witness: Option<VertexSet> },
    Minimum { witness: Option<VertexSet> },
    EnumerateAll { solutions: Vec<VertexSet> },
    Count { count: u64 },
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        match self {
            Answer::Decide { witness } | Answer::Minimum { witness } => witness.is_some(),
            Answer::EnumerateAll { solutions } => !solutions.is_empty(),
            Answer::Count { count } => *count > 0,
        }
    }

    pub fn witness(&self) -> Option<&VertexSet> {
        match self {
            Answer::Decide { witness } | Answer::Minimum { witness } => witness.as_ref(),
            Answer::EnumerateAll { solutions } => solutions.first(),
            Answer::Count { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    #[serde(flatten)]
    pub answer: Answer,
    pub free_dimensions: usize,
    pub search_nodes: u64,
}

/// (size, lexicographic) order on sets.
fn canonical_lt(a: &VertexSet, b: &VertexSet) -> bool {
    (a.len(), a) < (b.len(), b)
}

pub fn sort_canonical(sets: &mut [VertexSet]) {
    sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
}

const UNK: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

/// One binary choice: which vertices join the set when the bit is set and
/// when it is clear.
#[derive(Clone, Debug)]
struct Dim {
    set: Vec<usize>,
    clear: Vec<usize>,
}

struct Space {
    verts: Vec<VertexId>,
    nbrs: Vec<Vec<usize>>,
    base: Vec<u8>,
    dims: Vec<Dim>,
    pairs: Vec<(usize, usize)>,
    k: usize,
    mode: Mode,
    /// Side constraints contradict each other.
    infeasible: bool,
}

impl Space {
    fn build(inst: &AllianceInstance) -> Space {
        let g = inst.graph();
        let verts: Vec<VertexId> = g.vertices().cloned().collect();
        let index: BTreeMap<&VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let nbrs = verts
            .iter()
            .map(|v| g.neighbors(v).expect("vertex of g").iter().map(|w| index[w]).collect())
            .collect();
        let mut base = vec![UNK; verts.len()];
        for v in inst.forbidden() {
            base[index[v]] = OUT;
        }
        for v in inst.necessary() {
            base[index[v]] = IN;
        }
        let pairs: Vec<(usize, usize)> = inst.pairs().iter().map(|p| (index[p.first()], index[p.second()])).collect();
        let mut pair_adj = vec![Vec::new(); verts.len()];
        for &(a, b) in &pairs {
            pair_adj[a].push(b);
            pair_adj[b].push(a);
        }

        let mut infeasible = false;
        let mut colour = vec![u8::MAX; verts.len()];
        let mut dims = Vec::new();
        for start in 0..verts.len() {
            if colour[start] != u8::MAX || base[start] == OUT {
                continue;
            }
            if pair_adj[start].is_empty() {
                colour[start] = 0;
                if base[start] == UNK {
                    dims.push(Dim { set: vec![start], clear: vec![] });
                }
                continue;
            }
            // BFS 2-colouring of the pair component; `start` is its least vertex
            let mut classes = [Vec::new(), Vec::new()];
            colour[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                classes[colour[x] as usize].push(x);
                for &y in &pair_adj[x] {
                    if colour[y] == u8::MAX {
                        colour[y] = 1 - colour[x];
                        queue.push_back(y);
                    } else if colour[y] == colour[x] {
                        infeasible = true;
                    }
                }
            }
            let fixed: Vec<u8> = [0, 1].map(|c| u8::from(classes[c].iter().any(|&x| base[x] == IN))).to_vec();
            match (fixed[0], fixed[1]) {
                (1, 1) => infeasible = true,
                (1, 0) | (0, 1) => {
                    let inside = if fixed[0] == 1 { 0 } else { 1 };
                    for &x in &classes[inside] {
                        base[x] = IN;
                    }
                    for &x in &classes[1 - inside] {
                        base[x] = OUT;
                    }
                }
                _ => {
                    let [a, b] = classes;
                    dims.push(Dim { set: a, clear: b });
                }
            }
        }
        Space { verts, nbrs, base, dims, pairs, k: inst.k(), mode: inst.mode(), infeasible }
    }

    fn size_ok(&self, size: usize) -> bool {
        match self.mode {
            Mode::AtMost => (1..=self.k).contains(&size),
            Mode::Exact => size >= 1 && size == self.k,
        }
    }

    fn is_alliance(&self, inside: &[bool]) -> bool {
        (0..inside.len()).filter(|&v| inside[v]).all(|v| {
            let d = 1 + self.nbrs[v].iter().filter(|&&w| inside[w]).count();
            2 * d > self.nbrs[v].len()
        })
    }

    fn to_set(&self, inside: impl Iterator<Item = usize>) -> VertexSet {
        inside.map(|i| self.verts[i].clone()).collect()
    }
}

struct Collector {
    goal: Goal,
    best: Option<VertexSet>,
    all: Vec<VertexSet>,
    count: u64,
}

impl Collector {
    fn new(goal: Goal) -> Self {
        Collector { goal, best: None, all: Vec::new(), count: 0 }
    }

    fn offer(&mut self, sp: &Space, inside: impl Iterator<Item = usize>) {
        self.count += 1;
        match self.goal {
            Goal::Count => {}
            Goal::EnumerateAll => self.all.push(sp.to_set(inside)),
            Goal::Decide | Goal::Minimum => {
                let s = sp.to_set(inside);
                if self.best.as_ref().is_none_or(|b| canonical_lt(&s, b)) {
                    self.best = Some(s);
                }
            }
        }
    }

    /// Largest size still worth exploring.
    fn size_cap(&self) -> usize {
        match (&self.best, self.goal) {
            (Some(b), Goal::Decide | Goal::Minimum) => b.len(),
            _ => usize::MAX,
        }
    }

    fn finish(mut self) -> Answer {
        match self.goal {
            Goal::Decide => Answer::Decide { witness: self.best },
            Goal::Minimum => Answer::Minimum { witness: self.best },
            Goal::EnumerateAll => {
                sort_canonical(&mut self.all);
                Answer::EnumerateAll { solutions: self.all }
            }
            Goal::Count => Answer::Count { count: self.count },
        }
    }
}

/// Number of free dimensions of `inst`.
pub fn free_dimensions(inst: &AllianceInstance) -> usize {
    let sp = Space::build(inst);
    if sp.infeasible {
        0
    } else {
        sp.dims.len()
    }
}

pub fn solve(req: &SolveRequest<'_>) -> Result<SolveReport> {
    let sp = Space::build(req.instance);
    let free = if sp.infeasible { 0 } else { sp.dims.len() };
    let mut out = Collector::new(req.goal);
    let mut nodes = 0u64;
    if !sp.infeasible {
        if req.propagate {
            let limit = 1u64.checked_shl(req.budget.min(62) as u32).unwrap_or(u64::MAX);
            let mut search = Search { sp: &sp, out: &mut out, nodes: 0, limit };
            let ok = search.run(sp.base.clone());
            nodes = search.nodes;
            if !ok {
                return Err(Error::BudgetExceeded { free, budget: req.budget });
            }
        } else {
            if free > req.budget || free >= 63 {
                return Err(Error::BudgetExceeded { free, budget: req.budget });
            }
            nodes = enumerate(&sp, &mut out);
        }
    }
    log::debug!("solved with {free} free dimensions, {nodes} nodes");
    Ok(SolveReport { answer: out.finish(), free_dimensions: free, search_nodes: nodes })
}

fn enumerate(sp: &Space, out: &mut Collector) -> u64 {
    let d = sp.dims.len();
    let base: Vec<bool> = sp.base.iter().map(|&s| s == IN).collect();
    let fixed = base.iter().filter(|&&b| b).count();
    let mut inside = base.clone();
    for mask in 0u64..1 << d {
        inside.copy_from_slice(&base);
        let mut size = fixed;
        for (j, dim) in sp.dims.iter().enumerate() {
            let chosen = if mask >> j & 1 == 1 { &dim.set } else { &dim.clear };
            size += chosen.len();
            for &x in chosen {
                inside[x] = true;
            }
        }
        if sp.size_ok(size) && sp.is_alliance(&inside) {
            out.offer(sp, (0..inside.len()).filter(|&i| inside[i]));
        }
    }
    1 << d
}

struct Search<'a> {
    sp: &'a Space,
    out: &'a mut Collector,
    nodes: u64,
    limit: u64,
}

impl Search<'_> {
    /// False when the node limit was hit.
    fn run(&mut self, mut st: Vec<u8>) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            return false;
        }
        if !self.propagate(&mut st) {
            return true;
        }
        let Some(x) = st.iter().position(|&s| s == UNK) else {
            let size = st.iter().filter(|&&s| s == IN).count();
            if self.sp.size_ok(size) {
                self.out.offer(self.sp, (0..st.len()).filter(|&i| st[i] == IN));
            }
            return true;
        };
        for val in [IN, OUT] {
            let mut next = st.clone();
            next[x] = val;
            if !self.run(next) {
                return false;
            }
        }
        true
    }

    /// Unit propagation to a fixpoint. False on conflict.
    fn propagate(&self, st: &mut [u8]) -> bool {
        let sp = self.sp;
        loop {
            let mut changed = false;
            for &(a, b) in &sp.pairs {
                let (x, val) = match (st[a], st[b]) {
                    (IN, IN) | (OUT, OUT) => return false,
                    (IN, UNK) => (b, OUT),
                    (UNK, IN) => (a, OUT),
                    (OUT, UNK) => (b, IN),
                    (UNK, OUT) => (a, IN),
                    _ => continue,
                };
                st[x] = val;
                changed = true;
            }
            // every member needs at least half of its closed neighbourhood
            for v in 0..st.len() {
                if st[v] != IN {
                    continue;
                }
                let (mut inside, mut outside, mut unknown) = (1i64, 0i64, 0i64);
                for &w in &sp.nbrs[v] {
                    match st[w] {
                        IN => inside += 1,
                        OUT => outside += 1,
                        _ => unknown += 1,
                    }
                }
                // x of the unknown neighbours must join: inside + x ≥ outside + unknown − x
                let need = (outside + unknown - inside + 1).div_euclid(2).max(0);
                if need > unknown {
                    return false;
                }
                if need == unknown && unknown > 0 {
                    for &w in &sp.nbrs[v] {
                        if st[w] == UNK {
                            st[w] = IN;
                        }
                    }
                    changed = true;
                }
            }
            let inside = st.iter().filter(|&&s| s == IN).count();
            let unknown = st.iter().filter(|&&s| s == UNK).count();
            let cap = sp.k.min(self.out.size_cap());
            if inside > cap || (sp.mode == Mode::Exact && inside + unknown < sp.k) {
                return false;
            }
            if unknown > 0 && inside == cap {
                st.iter_mut().filter(|s| **s == UNK).for_each(|s| *s = OUT);
                changed = true;
            } else if unknown > 0 && sp.mode == Mode::Exact && inside + unknown == sp.k {
                st.iter_mut().filter(|s| **s == UNK).for_each(|s| *s = IN);
                changed = true;
            }
            if !changed {
                return true;
            }
        }
    }
}

/// Minimum defensive alliance of a plain at-most instance, searching only
/// connected candidate sets. Sound because every component of an alliance
/// is an alliance, so each smallest alliance is connected; in exact mode
/// that argument fails, hence the restriction.
pub fn solve_connected_pruned(inst: &AllianceInstance) -> Result<Option<VertexSet>> {
    if inst.variant() != Variant::Plain || inst.mode() != Mode::AtMost {
        return Err(Error::InvalidInstance(
            "connected search needs a plain instance in at-most mode".into(),
        ));
    }
    let sp = Space::build(inst);
    let n = sp.verts.len();
    if n > 64 {
        return Err(Error::TooLarge { what: "connected search input", size: n, limit: 64 });
    }
    let adj: Vec<u64> = sp.nbrs.iter().map(|ns| ns.iter().fold(0u64, |m, &w| m | 1 << w)).collect();
    let bit = |i: usize| 1u64 << i;
    let members = |m: u64| (0..n).filter(move |&i| m & bit(i) != 0);
    // breadth-first by size, so the first level holding alliances is minimal
    let mut level: Vec<u64> = (0..n).map(bit).collect();
    for _ in 1..=inst.k().min(n) {
        let mut hits: Vec<VertexSet> = Vec::new();
        for &m in &level {
            let mut inside = vec![false; n];
            members(m).for_each(|i| inside[i] = true);
            if sp.is_alliance(&inside) {
                hits.push(sp.to_set(members(m)));
            }
        }
        if !hits.is_empty() {
            sort_canonical(&mut hits);
            return Ok(hits.into_iter().next());
        }
        let mut next: Vec<u64> = level
            .iter()
            .flat_map(|&m| {
                let frontier = members(m).fold(0u64, |f, i| f | adj[i]) & !m;
                (0..n).filter(move |&i| frontier & bit(i) != 0).map(move |i| m | bit(i))
            })
            .collect();
        next.sort_unstable();
        next.dedup();
        level = next;
    }
    Ok(None)
}
