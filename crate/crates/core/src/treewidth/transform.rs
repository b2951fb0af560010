//! Decomposition transforms, one per reduction stage. Each takes a
//! decomposition of the stage's input structure and returns one of the
//! output graph. Wherever a construction needs "some node containing x",
//! the topmost such node of the input decomposition is used.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::reductions::{f2da, fn2f, fnc2fn, mmo2fnc, ReductionStage, StageInput, StageTag};
use crate::vertex::VertexId;

use super::{postorder_ordering, require_valid, NiceTreeDecomposition, TreeDecomposition};

pub fn transform_td(stage: &ReductionStage, td: &TreeDecomposition) -> Result<TreeDecomposition> {
    let name = stage.tag.name();
    require_valid(&stage.input_structure(), td, &format!("{name}: input decomposition"))
        .map_err(|e| Error::stage(name, e.to_string()))?;
    match (&stage.input, stage.tag) {
        (StageInput::Mmo(m), StageTag::Mmo2Fnc) => Ok(mmo(m, td)),
        (StageInput::Alliance(i), StageTag::Fnc2Fn) => Ok(fnc(i, td)),
        (StageInput::Alliance(i), StageTag::Fn2F) => fn_(stage, i, td),
        (StageInput::Alliance(i), StageTag::F2Da) => Ok(f(i, td)),
        _ => Err(Error::stage(name, "stage input does not match its tag")),
    }
}

fn with(base: &VertexSet, extra: impl IntoIterator<Item = VertexId>) -> VertexSet {
    let mut b = base.clone();
    b.extend(extra);
    b
}

fn top(td: &TreeDecomposition, vs: &[&VertexId]) -> usize {
    td.topmost_containing(vs).expect("validated decomposition covers the input structure")
}

/// Hangs chains below the topmost relevant nodes; width grows by at most 4.
fn mmo(m: &crate::mmo::MmoInstance, td: &TreeDecomposition) -> TreeDecomposition {
    use mmo2fnc::{copy, forbidden_copy, helpers};
    let mut out = td.clone();
    for (e, &w) in m.weights() {
        let (u, v) = (e.first(), e.second());
        let t = top(td, &[u, v]);
        let b = td.bag(t);
        if w == 1 {
            out.add_child(t, with(b, [copy(u, v, 1), copy(v, u, 1)]));
        } else {
            let mut at = t;
            for i in 1..w {
                at = out.add_child(at, with(b, [copy(u, v, i), copy(u, v, i + 1), copy(v, u, i), copy(v, u, i + 1)]));
            }
        }
        for (x, y) in [(u, v), (v, u)] {
            let t = top(td, &[x]);
            let mut at = t;
            for i in 1..=w {
                at = out.add_child(at, with(td.bag(t), [forbidden_copy(x, y, i)]));
            }
        }
    }
    for v in m.graph().vertices() {
        let t = top(td, &[v]);
        let mut at = t;
        for h in helpers(m, v) {
            at = out.add_child(at, with(td.bag(t), [h]));
        }
    }
    out
}

/// Adds v_n, v_n□ wherever v occurs, hangs the Y chain of v below t_v and
/// the pair gadget below the topmost node containing both endpoints. The
/// pair chain only carries the four connecting vertices a_n, a_n□, b_n, b_n□
/// besides its own, so its bags have nine vertices.
fn fnc(input: &crate::alliance::AllianceInstance, td: &TreeDecomposition) -> TreeDecomposition {
    use fnc2fn::{hub, triangle, y, yf, z, zf};
    let n = input.graph().vertex_count();
    let m = n * n + n;
    let mut out = td.clone();
    for x in 0..td.len() {
        let extra: Vec<VertexId> = td.bag(x).iter().flat_map(|v| [y(v, n), yf(v, n)]).collect();
        out.bag_mut(x).extend(extra);
    }
    for v in input.graph().vertices() {
        let mut at = top(td, &[v]);
        for i in (1..n).rev() {
            let bag = [v.clone(), y(v, i), yf(v, i), y(v, i + 1), yf(v, i + 1)].into();
            at = out.add_child(at, bag);
        }
    }
    for p in input.pairs() {
        let (a, b) = (p.first(), p.second());
        let d: VertexSet = [y(a, n), yf(a, n), y(b, n), yf(b, n)].into();
        let mut at = top(td, &[a, b]);
        for i in 1..m {
            at = out.add_child(at, with(&d, [hub(a, b), z(a, b, i), zf(a, b, i), z(a, b, i + 1), zf(a, b, i + 1)]));
        }
        at = out.add_child(at, with(&d, [hub(a, b), hub(b, a), triangle(p)]));
        for j in 1..m {
            let (hi, lo) = (m + 1 - j, m - j);
            at = out.add_child(at, with(&d, [hub(b, a), z(b, a, hi), zf(b, a, hi), z(b, a, lo), zf(b, a, lo)]));
        }
    }
    out
}

/// Needs a nice input decomposition whose post-order ordering is the one
/// the stage was built with. Step 1 puts the g/h gadget and v' into t_v;
/// step 2 inserts, above t_v, the A chain of p(v) and then (for free v) the
/// A chain of v, each node holding t_v's bag plus four chain vertices;
/// step 3 threads p(v)_1, p(v)_1□ along the tree path from the top of
/// p(u)'s chain to the bottom of p(v)'s chain for consecutive u, v.
fn fn_(stage: &ReductionStage, input: &crate::alliance::AllianceInstance, td: &TreeDecomposition) -> Result<TreeDecomposition> {
    use fn2f::{a, af, free_vertices, gv, gvf, hv, hvf, p_image, primed};
    let name = stage.tag.name();
    let nice = NiceTreeDecomposition::from_td(td.clone()).map_err(|e| Error::stage(name, e.to_string()))?;
    let eligible: VertexSet = input.allowed().cloned().collect();
    let expected = postorder_ordering(&nice, &eligible)?;
    if stage.ordering.as_ref() != Some(&expected) {
        return Err(Error::stage(name, "stage ordering is not the post-order ordering of this decomposition"));
    }
    let n = input.graph().vertex_count();
    let free = free_vertices(input);
    let tv: BTreeMap<&VertexId, usize> = eligible.iter().map(|v| (v, top(td, &[v]))).collect();
    let mut out = td.clone();
    for v in &free {
        out.bag_mut(tv[v]).extend([gv(v), gvf(v), hv(v), hvf(v), primed(v)]);
    }
    let mut bottom = BTreeMap::new();
    let mut upper = BTreeMap::new();
    for v in &eligible {
        let x = tv[v];
        let b = out.bag(x).clone();
        let mut chains = vec![p_image(input, v)];
        if free.contains(v) {
            chains.push(v.clone());
        }
        let mut below = x;
        for c in chains {
            for i in 1..=n {
                below = out.insert_above(below, with(&b, [a(&c, i), af(&c, i), a(&c, i + 1), af(&c, i + 1)]));
                if i == 1 {
                    bottom.insert(c.clone(), below);
                }
            }
            upper.insert(c, below);
        }
    }
    for w in expected.windows(2) {
        let (pu, pv) = (p_image(input, &w[0]), p_image(input, &w[1]));
        for x in out.path(upper[&pu], bottom[&pv]) {
            out.bag_mut(x).extend([a(&pv, 1), af(&pv, 1)]);
        }
    }
    Ok(out)
}

/// Inserts the fan chain of each forbidden f above t_f.
fn f(input: &crate::alliance::AllianceInstance, td: &TreeDecomposition) -> TreeDecomposition {
    use f2da::{fan_hub, fan_leaf};
    let mut out = td.clone();
    for fv in input.forbidden() {
        let t = top(td, &[fv]);
        let b = td.bag(t);
        if input.k() == 0 {
            out.insert_above(t, with(b, [fan_hub(fv)]));
            continue;
        }
        let mut below = t;
        for i in 1..=2 * input.k() {
            below = out.insert_above(below, with(b, [fan_hub(fv), fan_leaf(fv, i)]));
        }
    }
    out
}
