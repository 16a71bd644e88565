use super::{MachineDescription, Symbol};
use crate::bits::BitString;
use crate::error::{Error, Result};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    /// Largest number of distinct configurations allowed in one BFS layer.
    pub max_configs: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            max_configs: 1 << 20,
        }
    }
}

/// Step bound `n^e + e`, or `None` on overflow.
pub fn time_bound(n: usize, clock: u32) -> Option<usize> {
    n.checked_pow(clock)?.checked_add(clock as usize)
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Config {
    state: usize,
    head: usize,
    tape: Vec<Symbol>,
}

pub fn accepts(m: &MachineDescription, x: &BitString) -> Result<bool> {
    accepts_with(m, x, SimConfig::default())
}

/// Breadth-first search over configurations, one layer per step, up to
/// the clock bound.
pub fn accepts_with(m: &MachineDescription, x: &BitString, cfg: SimConfig) -> Result<bool> {
    let steps = time_bound(x.len(), m.clock())
        .ok_or_else(|| Error::BudgetExceeded("time bound overflows".into()))?;
    let states: Vec<&str> = m.states().iter().map(String::as_str).collect();
    let index_of = |s: &str| states.binary_search(&s).expect("declared state");
    let accept = index_of(m.accept());

    let mut tape: Vec<Symbol> = x.bits().iter().map(|&b| Symbol::from_bit(b)).collect();
    tape.resize(x.len().max(1), Symbol::Blank);
    let start = Config {
        state: index_of(m.start()),
        head: 0,
        tape,
    };
    if start.state == accept {
        return Ok(true);
    }
    let mut layer = HashSet::from([start]);
    for _ in 0..steps {
        let mut next = HashSet::new();
        for c in &layer {
            let read = c.tape.get(c.head).copied().unwrap_or(Symbol::Blank);
            for act in m.actions(states[c.state], read) {
                let mut tape = c.tape.clone();
                if c.head >= tape.len() {
                    tape.resize(c.head + 1, Symbol::Blank);
                }
                tape[c.head] = act.write;
                let succ = Config {
                    state: index_of(&act.next),
                    head: act.mv.apply(c.head),
                    tape,
                };
                if succ.state == accept {
                    return Ok(true);
                }
                next.insert(succ);
            }
        }
        if next.len() > cfg.max_configs {
            return Err(Error::BudgetExceeded(format!(
                "more than {} configurations in one step",
                cfg.max_configs
            )));
        }
        if next.is_empty() {
            return Ok(false);
        }
        layer = next;
    }
    Ok(false)
}
