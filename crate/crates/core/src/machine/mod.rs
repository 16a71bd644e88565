//! Clocked nondeterministic one-tape Turing machines.
//!
//! The tape alphabet is fixed to `{0, 1, _}`. The input is written
//! left-justified starting at cell 0 with the head on cell 0. A left move
//! on cell 0 leaves the head where it is. On inputs of length `n` every
//! computation path is cut off after `n^e + e` steps, where `e` is the
//! machine's clock exponent.

mod fixtures;
mod sim;
mod tag;

pub use fixtures::{all1, fixture_machines, has0, lastbit0, lastbit1};
pub use sim::{accepts, accepts_with, time_bound, SimConfig};
pub use tag::MachineTag;

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Zero,
    One,
    Blank,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::Zero, Symbol::One, Symbol::Blank];

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Blank => '_',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            '0' => Some(Symbol::Zero),
            '1' => Some(Symbol::One),
            '_' => Some(Symbol::Blank),
            _ => None,
        }
    }

    pub fn from_bit(b: bool) -> Symbol {
        if b {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    L,
    R,
    S,
}

impl Move {
    pub fn as_char(self) -> char {
        match self {
            Move::L => 'L',
            Move::R => 'R',
            Move::S => 'S',
        }
    }

    pub fn from_char(c: char) -> Option<Move> {
        match c {
            'L' => Some(Move::L),
            'R' => Some(Move::R),
            'S' => Some(Move::S),
            _ => None,
        }
    }

    /// Head position after the move; left moves stop at cell 0.
    pub fn apply(self, head: usize) -> usize {
        match self {
            Move::L => head.saturating_sub(1),
            Move::R => head + 1,
            Move::S => head,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub next: String,
    pub write: Symbol,
    pub mv: Move,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub state: String,
    pub read: Symbol,
    pub action: Action,
}

/// A validated machine. Construct via [`MachineDescription::new`] or by
/// parsing `.tm` text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MachineDescription {
    states: BTreeSet<String>,
    start: String,
    accept: String,
    transitions: BTreeMap<(String, Symbol), BTreeSet<Action>>,
    clock: u32,
}

pub(crate) fn is_state_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

impl MachineDescription {
    pub fn new(
        states: impl IntoIterator<Item = String>,
        start: impl Into<String>,
        accept: impl Into<String>,
        transitions: impl IntoIterator<Item = Transition>,
        clock: u32,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidMachine(msg));
        let states: BTreeSet<String> = states.into_iter().collect();
        let (start, accept) = (start.into(), accept.into());
        if states.is_empty() {
            return invalid("no states".into());
        }
        if let Some(bad) = states.iter().find(|s| !is_state_name(s)) {
            return invalid(format!("bad state name `{bad}`"));
        }
        for (role, s) in [("start", &start), ("accept", &accept)] {
            if !states.contains(s) {
                return invalid(format!("{role} state `{s}` is not declared"));
            }
        }
        if clock == 0 {
            return invalid("clock exponent must be positive".into());
        }
        let mut map: BTreeMap<(String, Symbol), BTreeSet<Action>> = BTreeMap::new();
        for t in transitions {
            for s in [&t.state, &t.action.next] {
                if !states.contains(s) {
                    return invalid(format!("transition uses undeclared state `{s}`"));
                }
            }
            if t.state == accept {
                return invalid("accept state has an outgoing transition".into());
            }
            map.entry((t.state, t.read)).or_default().insert(t.action);
        }
        Ok(MachineDescription {
            states,
            start,
            accept,
            transitions: map,
            clock,
        })
    }

    pub fn states(&self) -> &BTreeSet<String> {
        &self.states
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn accept(&self) -> &str {
        &self.accept
    }

    pub fn clock(&self) -> u32 {
        self.clock
    }

    /// Same machine with a different clock exponent.
    pub fn with_clock(&self, clock: u32) -> Result<Self> {
        if clock == 0 {
            return Err(Error::InvalidMachine("clock exponent must be positive".into()));
        }
        Ok(MachineDescription {
            clock,
            ..self.clone()
        })
    }

    /// Actions available in `state` reading `read`; empty if none.
    pub fn actions(&self, state: &str, read: Symbol) -> impl Iterator<Item = &Action> {
        self.transitions
            .get(&(state.to_string(), read))
            .into_iter()
            .flatten()
    }

    /// All transitions in canonical (sorted) order.
    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.transitions.iter().flat_map(|((state, read), acts)| {
            acts.iter().map(move |a| Transition {
                state: state.clone(),
                read: *read,
                action: a.clone(),
            })
        })
    }

    pub fn tag(&self) -> MachineTag {
        MachineTag::of(self)
    }

    /// Canonical `.tm` text: sorted states and transitions.
    pub fn to_tm_text(&self) -> String {
        let mut out = String::new();
        for s in &self.states {
            out.push_str(&format!("state {s}\n"));
        }
        out.push_str(&format!("start {}\naccept {}\nclock {}\n", self.start, self.accept, self.clock));
        for t in self.transitions() {
            out.push_str(&format!(
                "trans {} {} -> {} {} {}\n",
                t.state,
                t.read.as_char(),
                t.action.next,
                t.action.write.as_char(),
                t.action.mv.as_char()
            ));
        }
        out
    }
}

impl fmt::Display for MachineDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tm_text())
    }
}

fn single_char<T>(tok: &str, conv: impl Fn(char) -> Option<T>) -> Option<T> {
    let mut it = tok.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => conv(c),
        _ => None,
    }
}

/// Parses the line-oriented `.tm` format.
pub fn parse_machine(text: &str) -> Result<MachineDescription> {
    let mut states = Vec::new();
    let mut start = None;
    let mut accept = None;
    let mut clock = None;
    let mut transitions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: &str| Error::MachineFormat {
            line: line_no,
            msg: msg.to_string(),
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let set_once = |slot: &mut Option<String>, what: &str| -> Result<()> {
            if toks.len() != 2 {
                return Err(err(&format!("expected `{what} <name>`")));
            }
            if slot.replace(toks[1].to_string()).is_some() {
                return Err(err(&format!("duplicate `{what}`")));
            }
            Ok(())
        };
        match toks[0] {
            "state" => {
                if toks.len() != 2 || !is_state_name(toks[1]) {
                    return Err(err("expected `state <name>` with name over [a-z0-9_]"));
                }
                states.push(toks[1].to_string());
            }
            "start" => set_once(&mut start, "start")?,
            "accept" => set_once(&mut accept, "accept")?,
            "clock" => {
                let e: u32 = toks
                    .get(1)
                    .filter(|_| toks.len() == 2)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("expected `clock <positive integer>`"))?;
                if clock.replace(e).is_some() {
                    return Err(err("duplicate `clock`"));
                }
            }
            "trans" => {
                if toks.len() != 7 || toks[3] != "->" {
                    return Err(err("expected `trans <state> <sym> -> <state> <sym> <L|R|S>`"));
                }
                let read = single_char(toks[2], Symbol::from_char)
                    .ok_or_else(|| err("bad read symbol"))?;
                let write = single_char(toks[5], Symbol::from_char)
                    .ok_or_else(|| err("bad write symbol"))?;
                let mv = single_char(toks[6], Move::from_char).ok_or_else(|| err("bad move"))?;
                transitions.push(Transition {
                    state: toks[1].to_string(),
                    read,
                    action: Action {
                        next: toks[4].to_string(),
                        write,
                        mv,
                    },
                });
            }
            other => return Err(err(&format!("unknown directive `{other}`"))),
        }
    }
    let missing = |what: &str| Error::MachineFormat {
        line: 0,
        msg: format!("missing `{what}`"),
    };
    MachineDescription::new(
        states,
        start.ok_or_else(|| missing("start"))?,
        accept.ok_or_else(|| missing("accept"))?,
        transitions,
        clock.ok_or_else(|| missing("clock"))?,
    )
}

impl FromStr for MachineDescription {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_machine(s)
    }
}
