//! Boolean formulas over structured variable names.
//!
//! A [`Formula`] is an n-ary AST (`and`/`or` nodes have at least two
//! children). Variables are [`VarName`]s, which come in three syntactic
//! families: reduction-tagged names `x[TAG,q]`, the gadget series `z.ℓ` and
//! `zp.ℓ`, and free identifiers. Their canonical text is what orders,
//! compares and hashes them.

pub(crate) mod indexed;
mod text;

pub use indexed::IndexedFormula;
pub use text::parse_formula;

use crate::error::{Error, Result};
use crate::machine::MachineTag;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// `x[TAG,q]`: the `q`-th variable of a reduction output for machine `TAG`.
    Tagged { tag: MachineTag, index: usize },
    /// `z.ℓ` (unprimed) or `zp.ℓ` (primed).
    Z { primed: bool, index: usize },
    /// Any identifier over `[a-z0-9_]`.
    Free(String),
}

/// A variable name with its canonical serialization cached.
///
/// Equality, hashing and ordering go through the canonical text, so the
/// order is bytewise lexicographic on serializations.
#[derive(Clone)]
pub struct VarName {
    kind: VarKind,
    text: Arc<str>,
}

impl VarName {
    pub fn tagged(tag: MachineTag, index: usize) -> Result<Self> {
        if tag.is_empty() {
            return Err(Error::InvalidVarName("x[,..] with empty tag".into()));
        }
        if index == 0 {
            return Err(Error::InvalidVarName(format!("x[{tag},0]")));
        }
        let text = format!("x[{},{}]", tag.as_str(), index);
        Ok(VarName {
            kind: VarKind::Tagged { tag, index },
            text: text.into(),
        })
    }

    /// `z.index`; panics on index 0.
    pub fn z(index: usize) -> Self {
        Self::z_series(false, index)
    }

    /// `zp.index` (the primed series); panics on index 0.
    pub fn zp(index: usize) -> Self {
        Self::z_series(true, index)
    }

    fn z_series(primed: bool, index: usize) -> Self {
        assert!(index >= 1, "z-series indices start at 1");
        let text = if primed {
            format!("zp.{index}")
        } else {
            format!("z.{index}")
        };
        VarName {
            kind: VarKind::Z { primed, index },
            text: text.into(),
        }
    }

    pub fn free(name: &str) -> Result<Self> {
        if !is_ident(name) {
            return Err(Error::InvalidVarName(name.to_string()));
        }
        Ok(VarName {
            kind: VarKind::Free(name.to_string()),
            text: name.into(),
        })
    }

    pub fn kind(&self) -> &VarKind {
        &self.kind
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn is_z_series(&self) -> bool {
        matches!(self.kind, VarKind::Z { .. })
    }

    pub fn tag(&self) -> Option<&MachineTag> {
        match &self.kind {
            VarKind::Tagged { tag, .. } => Some(tag),
            _ => None,
        }
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

fn parse_index(s: &str) -> Option<usize> {
    if s.is_empty() || s.starts_with('0') || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok().filter(|&i| i >= 1)
}

impl FromStr for VarName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidVarName(s.to_string());
        if let Some(rest) = s.strip_prefix("zp.") {
            return parse_index(rest).map(VarName::zp).ok_or_else(bad);
        }
        if let Some(rest) = s.strip_prefix("z.") {
            return parse_index(rest).map(VarName::z).ok_or_else(bad);
        }
        if let Some(rest) = s.strip_prefix("x[") {
            let body = rest.strip_suffix(']').ok_or_else(bad)?;
            let (tag, idx) = body.rsplit_once(',').ok_or_else(bad)?;
            let tag = MachineTag::from_text(tag).map_err(|_| bad())?;
            let idx = parse_index(idx).ok_or_else(bad)?;
            return VarName::tagged(tag, idx);
        }
        VarName::free(s)
    }
}

impl PartialEq for VarName {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for VarName {}

impl Hash for VarName {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.text.hash(state)
    }
}

impl Ord for VarName {
    fn cmp(&self, other: &Self) -> Ordering {
        self.text.as_bytes().cmp(other.text.as_bytes())
    }
}

impl PartialOrd for VarName {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl serde::Serialize for VarName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> serde::Deserialize<'de> for VarName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Debug for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text)
    }
}

/// Boolean formula AST.
///
/// `And`/`Or` must carry at least two children; use the checked
/// constructors ([`Formula::and`], [`Formula::or`]) or the collapsing ones
/// ([`Formula::all`], [`Formula::any`]) rather than building the variants
/// by hand. [`Formula::is_well_formed`] checks the arity rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(VarName),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

/// Result of substituting a partial assignment into a formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Simplified {
    Const(bool),
    Formula(Formula),
}

impl Simplified {
    pub fn as_const(&self) -> Option<bool> {
        match self {
            Simplified::Const(b) => Some(*b),
            Simplified::Formula(_) => None,
        }
    }
}

impl Formula {
    pub fn var(v: VarName) -> Self {
        Formula::Var(v)
    }

    pub fn lit(v: VarName, positive: bool) -> Self {
        if positive {
            Formula::Var(v)
        } else {
            Formula::Not(Box::new(Formula::Var(v)))
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(children: Vec<Formula>) -> Result<Self> {
        if children.len() < 2 {
            return Err(Error::InvalidParams(format!(
                "and-node needs at least 2 children, got {}",
                children.len()
            )));
        }
        Ok(Formula::And(children))
    }

    pub fn or(children: Vec<Formula>) -> Result<Self> {
        if children.len() < 2 {
            return Err(Error::InvalidParams(format!(
                "or-node needs at least 2 children, got {}",
                children.len()
            )));
        }
        Ok(Formula::Or(children))
    }

    /// Conjunction that collapses a single child to itself.
    pub fn all(mut children: Vec<Formula>) -> Result<Self> {
        match children.len() {
            0 => Err(Error::EmptyFormula),
            1 => Ok(children.pop().unwrap()),
            _ => Ok(Formula::And(children)),
        }
    }

    /// Disjunction that collapses a single child to itself.
    pub fn any(mut children: Vec<Formula>) -> Result<Self> {
        match children.len() {
            0 => Err(Error::EmptyFormula),
            1 => Ok(children.pop().unwrap()),
            _ => Ok(Formula::Or(children)),
        }
    }

    pub fn is_well_formed(&self) -> bool {
        match self {
            Formula::Var(_) => true,
            Formula::Not(c) => c.is_well_formed(),
            Formula::And(cs) | Formula::Or(cs) => {
                cs.len() >= 2 && cs.iter().all(Formula::is_well_formed)
            }
        }
    }

    /// `Some((v, polarity))` if this is `v` or `¬v`.
    pub fn as_literal(&self) -> Option<(&VarName, bool)> {
        match self {
            Formula::Var(v) => Some((v, true)),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Var(v) => Some((v, false)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.for_each_var(&mut |v| {
            if !out.contains(v) {
                out.insert(v.clone());
            }
        });
        out
    }

    pub fn numvars(&self) -> usize {
        self.vars().len()
    }

    /// Visits every variable occurrence in preorder.
    pub fn for_each_var<'a>(&'a self, visit: &mut impl FnMut(&'a VarName)) {
        match self {
            Formula::Var(v) => visit(v),
            Formula::Not(c) => c.for_each_var(visit),
            Formula::And(cs) | Formula::Or(cs) => {
                for c in cs {
                    c.for_each_var(visit);
                }
            }
        }
    }

    /// Rebuilds the formula with every variable mapped through `rename`.
    pub fn map_vars(&self, rename: &mut impl FnMut(&VarName) -> VarName) -> Formula {
        match self {
            Formula::Var(v) => Formula::Var(rename(v)),
            Formula::Not(c) => Formula::Not(Box::new(c.map_vars(rename))),
            Formula::And(cs) => Formula::And(cs.iter().map(|c| c.map_vars(rename)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| c.map_vars(rename)).collect()),
        }
    }

    /// Replaces bound variables by constants and propagates them away.
    ///
    /// The result is either a constant or a formula containing no constants.
    pub fn substitute(&self, a: &PartialAssignment) -> Simplified {
        match self {
            Formula::Var(v) => match a.get(v) {
                Some(b) => Simplified::Const(b),
                None => Simplified::Formula(self.clone()),
            },
            Formula::Not(c) => match c.substitute(a) {
                Simplified::Const(b) => Simplified::Const(!b),
                Simplified::Formula(g) => Simplified::Formula(Formula::not(g)),
            },
            Formula::And(cs) => combine(cs, a, false),
            Formula::Or(cs) => combine(cs, a, true),
        }
    }

    /// Total-assignment evaluation.
    pub fn evaluate(&self, a: &PartialAssignment) -> Result<bool> {
        match self {
            Formula::Var(v) => a.get(v).ok_or_else(|| Error::UnboundVariable(v.clone())),
            Formula::Not(c) => Ok(!c.evaluate(a)?),
            Formula::And(cs) => {
                // Visit every child so unbound variables are always reported.
                let mut acc = true;
                for c in cs {
                    acc &= c.evaluate(a)?;
                }
                Ok(acc)
            }
            Formula::Or(cs) => {
                let mut acc = false;
                for c in cs {
                    acc |= c.evaluate(a)?;
                }
                Ok(acc)
            }
        }
    }

    /// Canonical text form; see [`parse_formula`] for the grammar.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        text::write_formula(self, &mut out);
        out
    }
}

/// `absorbing` is the value that decides the node: false for and, true for or.
fn combine(children: &[Formula], a: &PartialAssignment, is_or: bool) -> Simplified {
    let absorbing = is_or;
    let mut kept = Vec::with_capacity(children.len());
    for c in children {
        match c.substitute(a) {
            Simplified::Const(b) if b == absorbing => return Simplified::Const(absorbing),
            Simplified::Const(_) => {}
            Simplified::Formula(g) => kept.push(g),
        }
    }
    match kept.len() {
        0 => Simplified::Const(!absorbing),
        1 => Simplified::Formula(kept.pop().unwrap()),
        _ if is_or => Simplified::Formula(Formula::Or(kept)),
        _ => Simplified::Formula(Formula::And(kept)),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_formula(s)
    }
}

/// Finite map from variables to truth values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PartialAssignment {
    bindings: BTreeMap<VarName, bool>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `v`, replacing any earlier binding.
    pub fn bind(&mut self, v: VarName, value: bool) {
        self.bindings.insert(v, value);
    }

    pub fn with(mut self, v: VarName, value: bool) -> Self {
        self.bind(v, value);
        self
    }

    pub fn get(&self, v: &VarName) -> Option<bool> {
        self.bindings.get(v).copied()
    }

    pub fn contains(&self, v: &VarName) -> bool {
        self.bindings.contains_key(v)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<VarName> {
        self.bindings.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, bool)> {
        self.bindings.iter().map(|(v, b)| (v, *b))
    }

    pub fn restrict(&self, vars: &BTreeSet<VarName>) -> PartialAssignment {
        self.bindings
            .iter()
            .filter(|(v, _)| vars.contains(*v))
            .map(|(v, b)| (v.clone(), *b))
            .collect()
    }

    /// Values as a `0`/`1` string in variable order; the empty assignment
    /// gives the empty string.
    pub fn bits(&self) -> String {
        self.bindings
            .values()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

impl FromIterator<(VarName, bool)> for PartialAssignment {
    fn from_iter<I: IntoIterator<Item = (VarName, bool)>>(iter: I) -> Self {
        PartialAssignment {
            bindings: iter.into_iter().collect(),
        }
    }
}

/// A backbone `S` together with its value `a_S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackboneCertificate {
    vars: BTreeSet<VarName>,
    value: PartialAssignment,
}

impl BackboneCertificate {
    pub fn new(vars: BTreeSet<VarName>, value: PartialAssignment) -> Result<Self> {
        if value.domain() != vars {
            return Err(Error::DomainMismatch);
        }
        Ok(BackboneCertificate { vars, value })
    }

    pub fn vars(&self) -> &BTreeSet<VarName> {
        &self.vars
    }

    pub fn value(&self) -> &PartialAssignment {
        &self.value
    }

    pub fn size(&self) -> usize {
        self.vars.len()
    }
}
