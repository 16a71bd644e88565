//! Canonical machine tags.
//!
//! A tag is a whitespace-free, comma-free serialization of a
//! [`MachineDescription`] that stands in for the machine's enumeration
//! index. Layout:
//!
//! ```text
//! tm1:e<clock>:<start>:<accept>:<state>.<state>...:<trans>/<trans>/...
//! trans := <state>.<read>.<next>.<write>.<move>
//! ```
//!
//! States and transitions appear in sorted order, so equal machines get
//! equal tags regardless of how their description files were written.

use super::{is_state_name, Action, MachineDescription, Move, Symbol, Transition};
use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MachineTag(Arc<str>);

fn tag_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | ':' | '/')
}

impl MachineTag {
    /// The tag carried by the junk pair; never produced by [`MachineTag::of`].
    pub fn empty() -> Self {
        MachineTag(Arc::from(""))
    }

    /// Accepts any nonempty text over the tag alphabet `[A-Za-z0-9_.:/]`
    /// without checking that it decodes to a machine.
    pub fn from_text(text: &str) -> Result<Self> {
        if text.is_empty() || !text.chars().all(tag_char) {
            return Err(Error::TagParse(text.to_string()));
        }
        Ok(MachineTag(Arc::from(text)))
    }

    pub fn of(m: &MachineDescription) -> Self {
        let states: Vec<&str> = m.states().iter().map(String::as_str).collect();
        let trans: Vec<String> = m
            .transitions()
            .map(|t| {
                format!(
                    "{}.{}.{}.{}.{}",
                    t.state,
                    t.read.as_char(),
                    t.action.next,
                    t.action.write.as_char(),
                    t.action.mv.as_char()
                )
            })
            .collect();
        let text = format!(
            "tm1:e{}:{}:{}:{}:{}",
            m.clock(),
            m.start(),
            m.accept(),
            states.join("."),
            trans.join("/")
        );
        MachineTag(Arc::from(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reconstructs the machine this tag was made from.
    pub fn parse(&self) -> Result<MachineDescription> {
        parse_tag(self.as_str())
    }
}

impl fmt::Display for MachineTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for MachineTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MachineTag({})", self.0)
    }
}

pub fn parse_tag(text: &str) -> Result<MachineDescription> {
    let bad = |why: &str| Error::TagParse(format!("{why}: `{text}`"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 6 || parts[0] != "tm1" {
        return Err(bad("expected 6 `:`-separated fields starting with `tm1`"));
    }
    let clock: u32 = parts[1]
        .strip_prefix('e')
        .filter(|d| !d.starts_with('0'))
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| bad("bad clock field"))?;
    let states: Vec<String> = parts[4].split('.').map(str::to_string).collect();
    if states.iter().any(|s| !is_state_name(s)) {
        return Err(bad("bad state list"));
    }
    let mut transitions = Vec::new();
    if !parts[5].is_empty() {
        for t in parts[5].split('/') {
            let f: Vec<&str> = t.split('.').collect();
            let sym = |s: &str| {
                let mut cs = s.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => Symbol::from_char(c),
                    _ => None,
                }
            };
            let mv = |s: &str| {
                let mut cs = s.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => Move::from_char(c),
                    _ => None,
                }
            };
            match f.as_slice() {
                [state, read, next, write, m] => transitions.push(Transition {
                    state: state.to_string(),
                    read: sym(read).ok_or_else(|| bad("bad read symbol"))?,
                    action: Action {
                        next: next.to_string(),
                        write: sym(write).ok_or_else(|| bad("bad write symbol"))?,
                        mv: mv(m).ok_or_else(|| bad("bad move"))?,
                    },
                }),
                _ => return Err(bad("bad transition")),
            }
        }
    }
    let m = MachineDescription::new(states, parts[2], parts[3], transitions, clock)
        .map_err(|e| bad(&e.to_string()))?;
    // Reject texts that decode but are not in canonical form.
    if MachineTag::of(&m).as_str() != text {
        return Err(bad("not in canonical form"));
    }
    Ok(m)
}
