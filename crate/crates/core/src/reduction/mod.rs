//! Transparent (invertible) machine-to-SAT reduction.
//!
//! [`reduce`] wraps the tableau reduction: every variable is renamed to
//! `x[TAG,q]` with `q` its rank among the base formula's variables, and a
//! tautological disjunction over the fresh variable `x[TAG,p+1]` spells out
//! the input. [`invert`] reads the machine tag and the input back without
//! re-running anything.

mod tableau;

pub use tableau::{reduce_base, ReduceConfig};

use crate::bits::BitString;
use crate::error::Result;
use crate::formula::{Formula, VarKind, VarName};
use crate::machine::{MachineDescription, MachineTag};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `(F') ∧ (input block)` together with what produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionArtifact {
    pub formula: Formula,
    pub machine_tag: MachineTag,
    pub input: BitString,
    /// Number of variables of `F'`.
    pub p: usize,
}

/// Companion metadata written next to a serialized artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactMeta {
    pub machine_tag: String,
    pub input: BitString,
    pub p: usize,
}

impl ArtifactMeta {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serializes")
    }
}

impl ReductionArtifact {
    pub fn meta(&self) -> ArtifactMeta {
        ArtifactMeta {
            machine_tag: self.machine_tag.to_string(),
            input: self.input.clone(),
            p: self.p,
        }
    }
}

/// Renames each variable to `x[tag,q]`, `q` being its 1-based rank in
/// canonical name order. Returns the renamed formula and the variable count.
pub fn rename_vars(f: &Formula, tag: &MachineTag) -> (Formula, usize) {
    let ranks: BTreeMap<VarName, VarName> = f
        .vars()
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let renamed = VarName::tagged(tag.clone(), i + 1).expect("nonempty tag, positive index");
            (v, renamed)
        })
        .collect();
    let p = ranks.len();
    (f.map_vars(&mut |v| ranks[v].clone()), p)
}

/// `¬v ∨ v ∨ c_{b_1} ∨ ... ∨ c_{b_n}` over `v = x[tag,p+1]`, where a 1 bit
/// is written `v` and a 0 bit `¬v`.
pub fn encode_input_block(tag: &MachineTag, p: usize, x: &BitString) -> Formula {
    let v = VarName::tagged(tag.clone(), p + 1).expect("nonempty tag");
    let mut ds = vec![Formula::lit(v.clone(), false), Formula::lit(v.clone(), true)];
    ds.extend(x.bits().iter().map(|&b| Formula::lit(v.clone(), b)));
    Formula::Or(ds)
}

pub fn reduce(m: &MachineDescription, x: &BitString) -> Result<ReductionArtifact> {
    reduce_with(m, x, ReduceConfig::default())
}

pub fn reduce_with(
    m: &MachineDescription,
    x: &BitString,
    cfg: ReduceConfig,
) -> Result<ReductionArtifact> {
    let base = reduce_base(m, x, cfg)?;
    let tag = m.tag();
    let (renamed, p) = rename_vars(&base, &tag);
    let block = encode_input_block(&tag, p, x);
    Ok(ReductionArtifact {
        formula: Formula::And(vec![renamed, block]),
        machine_tag: tag,
        input: x.clone(),
        p,
    })
}

/// Output of [`invert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inverted {
    Pair { tag: MachineTag, input: BitString },
    Junk,
}

impl Inverted {
    pub fn is_junk(&self) -> bool {
        matches!(self, Inverted::Junk)
    }

    /// The decoded pair; junk maps to `(empty tag, "")`.
    pub fn into_pair(self) -> (MachineTag, BitString) {
        match self {
            Inverted::Pair { tag, input } => (tag, input),
            Inverted::Junk => (MachineTag::empty(), BitString::empty()),
        }
    }
}

/// Decodes `(machine tag, input)` from a reduction output.
///
/// Only the shape is checked: the formula must be `(A) ∧ (B)` with every
/// variable of `A` tagged by one tag that decodes to a machine, and `B` a
/// disjunction of literals over a single variable with that tag whose first
/// two disjuncts are `¬v` and `v`. Anything else is [`Inverted::Junk`]. A
/// formula that passes is not necessarily a true reduction output; callers
/// that need that must recompute.
pub fn invert(f: &Formula) -> Inverted {
    decode(f).unwrap_or(Inverted::Junk)
}

fn decode(f: &Formula) -> Option<Inverted> {
    let (body, block) = match f {
        Formula::And(cs) if cs.len() == 2 => (&cs[0], &cs[1]),
        _ => return None,
    };
    let mut tag: Option<&MachineTag> = None;
    let mut consistent = true;
    body.for_each_var(&mut |v| match v.kind() {
        VarKind::Tagged { tag: t, .. } => match tag {
            None => tag = Some(t),
            Some(seen) => consistent &= seen == t,
        },
        _ => consistent = false,
    });
    let tag = tag.filter(|_| consistent)?;
    let disjuncts = match block {
        Formula::Or(ds) => ds,
        _ => return None,
    };
    let lits: Vec<(&VarName, bool)> = disjuncts
        .iter()
        .map(Formula::as_literal)
        .collect::<Option<_>>()?;
    let v = lits[0].0;
    if v.tag() != Some(tag) || lits.iter().any(|(w, _)| *w != v) {
        return None;
    }
    if lits[0].1 || !lits[1].1 {
        return None;
    }
    tag.parse().ok()?;
    let input = BitString::from_bools(lits[2..].iter().map(|&(_, b)| b).collect());
    Some(Inverted::Pair {
        tag: tag.clone(),
        input,
    })
}
