//! Structured vertex identifiers.
//!
//! Gadget constructions nest: a reduction applied to the output of another
//! reduction creates gadgets around gadget vertices. A [`VertexId`] therefore
//! either names an input vertex or describes a gadget vertex by its role, the
//! vertex it hangs off, an optional partner vertex and up to two indices.
//!
//! The canonical text form is `base[.partner]/tag[i[,j]]`, where a base or
//! partner that is itself a gadget vertex is wrapped in parentheses, e.g.
//! `a.b/ec1` for the first edge copy of `a` towards `b` and `(a/y3)/a2` for an
//! element of a chain attached to the gadget vertex `a/y3`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// What a vertex is for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Original,
    /// Necessary helper attached to an outdegree vertex.
    Helper,
    /// Edge copy on the side of `base` towards `partner`.
    EdgeCopy,
    EdgeCopyForbidden,
    ChainY,
    ChainYForbidden,
    ChainZ,
    ChainZForbidden,
    /// Hub joining a Z chain to the triangle vertex of a complementary pair.
    PairHub,
    Triangle,
    Primed,
    FanHub,
    FanLeaf,
    AChain,
    AChainForbidden,
    G,
    H,
    GForbidden,
    HForbidden,
}

impl Role {
    const TAGGED: [Role; 18] = [
        Role::Helper,
        Role::EdgeCopy,
        Role::EdgeCopyForbidden,
        Role::ChainY,
        Role::ChainYForbidden,
        Role::ChainZ,
        Role::ChainZForbidden,
        Role::PairHub,
        Role::Triangle,
        Role::Primed,
        Role::FanHub,
        Role::FanLeaf,
        Role::AChain,
        Role::AChainForbidden,
        Role::G,
        Role::H,
        Role::GForbidden,
        Role::HForbidden,
    ];

    /// Tag used in the canonical rendering. `Original` has none.
    pub fn tag(self) -> &'static str {
        match self {
            Role::Original => "",
            Role::Helper => "h",
            Role::EdgeCopy => "ec",
            Role::EdgeCopyForbidden => "ecf",
            Role::ChainY => "y",
            Role::ChainYForbidden => "yf",
            Role::ChainZ => "z",
            Role::ChainZForbidden => "zf",
            Role::PairHub => "ph",
            Role::Triangle => "tri",
            Role::Primed => "pr",
            Role::FanHub => "fh",
            Role::FanLeaf => "fl",
            Role::AChain => "a",
            Role::AChainForbidden => "af",
            Role::G => "gv",
            Role::H => "hv",
            Role::GForbidden => "gvf",
            Role::HForbidden => "hvf",
        }
    }

    fn from_tag(tag: &str) -> Option<Role> {
        Role::TAGGED.iter().copied().find(|r| r.tag() == tag)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexId {
    Named(String),
    Gadget(Box<GadgetId>),
}

/// Field order matters: identifiers sort by base first so gadgets cluster
/// around the vertex they belong to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GadgetId {
    pub base: VertexId,
    pub partner: Option<VertexId>,
    pub role: Role,
    pub indices: Vec<u32>,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

impl VertexId {
    /// Panics if `name` is empty or contains characters outside
    /// `[alphanumeric _ -]`; use [`VertexId::try_named`] for untrusted input.
    pub fn named(name: impl Into<String>) -> Self {
        let name = name.into();
        match Self::try_named(name) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn try_named(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || !name.chars().all(is_name_char) {
            return Err(Error::ParseVertex(name));
        }
        Ok(VertexId::Named(name))
    }

    pub fn gadget(role: Role, base: &VertexId, partner: Option<&VertexId>, indices: &[u32]) -> Self {
        assert!(role != Role::Original, "gadget vertices need a gadget role");
        assert!(indices.len() <= 2, "at most two indices");
        VertexId::Gadget(Box::new(GadgetId {
            base: base.clone(),
            partner: partner.cloned(),
            role,
            indices: indices.to_vec(),
        }))
    }

    /// Gadget vertex `self/role{index}`.
    pub fn indexed(&self, role: Role, index: u32) -> Self {
        Self::gadget(role, self, None, &[index])
    }

    /// Gadget vertex `self/role` without indices.
    pub fn tagged(&self, role: Role) -> Self {
        Self::gadget(role, self, None, &[])
    }

    /// Gadget vertex `self.partner/role{index}`.
    pub fn paired(&self, partner: &VertexId, role: Role, index: Option<u32>) -> Self {
        let idx: Vec<u32> = index.into_iter().collect();
        Self::gadget(role, self, Some(partner), &idx)
    }

    pub fn role(&self) -> Role {
        match self {
            VertexId::Named(_) => Role::Original,
            VertexId::Gadget(g) => g.role,
        }
    }

    /// The vertex a gadget vertex hangs off; `None` for named vertices.
    pub fn base(&self) -> Option<&VertexId> {
        match self {
            VertexId::Named(_) => None,
            VertexId::Gadget(g) => Some(&g.base),
        }
    }

    pub fn partner(&self) -> Option<&VertexId> {
        match self {
            VertexId::Named(_) => None,
            VertexId::Gadget(g) => g.partner.as_ref(),
        }
    }

    pub fn indices(&self) -> &[u32] {
        match self {
            VertexId::Named(_) => &[],
            VertexId::Gadget(g) => &g.indices,
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Named(name) => f.write_str(name),
            VertexId::Gadget(_) => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Named(name) => f.write_str(name),
            VertexId::Gadget(g) => {
                g.base.fmt_atom(f)?;
                if let Some(p) = &g.partner {
                    f.write_str(".")?;
                    p.fmt_atom(f)?;
                }
                write!(f, "/{}", g.role.tag())?;
                for (i, idx) in g.indices.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{idx}")?;
                }
                Ok(())
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn fail(&self) -> Error {
        Error::ParseVertex(self.src.to_string())
    }

    /// `(vertex)` or a plain name.
    fn atom(&mut self) -> Result<VertexId> {
        if self.eat('(') {
            let inner = self.vertex()?;
            if !self.eat(')') || !matches!(inner, VertexId::Gadget(_)) {
                return Err(self.fail());
            }
            Ok(inner)
        } else {
            let name = self.take_while(is_name_char);
            if name.is_empty() {
                return Err(self.fail());
            }
            Ok(VertexId::Named(name.to_string()))
        }
    }

    fn vertex(&mut self) -> Result<VertexId> {
        let start = self.pos;
        let base = self.atom()?;
        let partner = if self.eat('.') { Some(self.atom()?) } else { None };
        if !self.eat('/') {
            // a bare parenthesised atom or a dangling partner is not canonical
            if partner.is_some() || self.src[start..].starts_with('(') {
                return Err(self.fail());
            }
            return Ok(base);
        }
        let tag = self.take_while(|c| c.is_ascii_lowercase());
        let role = Role::from_tag(tag).ok_or_else(|| self.fail())?;
        let mut indices = Vec::new();
        loop {
            let digits = self.take_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                if !indices.is_empty() {
                    return Err(self.fail());
                }
                break;
            }
            indices.push(digits.parse().map_err(|_| self.fail())?);
            if !self.eat(',') {
                break;
            }
        }
        if indices.len() > 2 {
            return Err(self.fail());
        }
        Ok(VertexId::gadget(role, &base, partner.as_ref(), &indices))
    }
}

impl FromStr for VertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let v = p.vertex()?;
        if p.pos != s.len() {
            return Err(p.fail());
        }
        Ok(v)
    }
}

impl From<&str> for VertexId {
    /// Parses the canonical form; panics on malformed input.
    fn from(s: &str) -> Self {
        s.parse().unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_edge_copy() {
        let a = VertexId::named("a");
        let b = VertexId::named("b");
        assert_eq!(a.paired(&b, Role::EdgeCopy, Some(1)).to_string(), "a.b/ec1");
        assert_eq!(a.indexed(Role::Helper, 5).to_string(), "a/h5");
        assert_eq!(a.tagged(Role::Primed).to_string(), "a/pr");
    }

    #[test]
    fn nested_gadgets_are_parenthesised() {
        let a = VertexId::named("a");
        let y = a.indexed(Role::ChainY, 3);
        let chain = y.tagged(Role::Primed).indexed(Role::AChain, 2);
        assert_eq!(chain.to_string(), "((a/y3)/pr)/a2");
        assert_eq!(chain.to_string().parse::<VertexId>().unwrap(), chain);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "a/", "a.b", "a/zz1", "(a)", "a/h1,", "a/h1,2,3", "a b", "a/h1x"] {
            assert!(bad.parse::<VertexId>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn named_sort_before_gadgets_and_by_base() {
        let a = VertexId::named("a");
        let b = VertexId::named("b");
        let ah = a.indexed(Role::Helper, 1);
        assert!(a < b && b < ah);
        let mut v = vec![ah.clone(), b.clone(), a.clone()];
        v.sort();
        assert_eq!(v, vec![a, b, ah]);
    }

    fn arb_vertex() -> impl Strategy<Value = VertexId> {
        let leaf = "[a-z0-9_]{1,4}".prop_map(VertexId::Named);
        leaf.prop_recursive(3, 12, 2, |inner| {
            (
                inner.clone(),
                proptest::option::of(inner),
                proptest::sample::select(Role::TAGGED.to_vec()),
                proptest::collection::vec(0u32..50, 0..=2),
            )
                .prop_map(|(b, p, r, idx)| VertexId::gadget(r, &b, p.as_ref(), &idx))
        })
    }

    proptest! {
        #[test]
        fn canonical_text_round_trips(v in arb_vertex()) {
            let text = v.to_string();
            prop_assert_eq!(text.parse::<VertexId>().unwrap(), v);
        }
    }
}
