//! Computation-tableau reduction from "machine accepts x within its clock"
//! to satisfiability.
//!
//! For `T = |x|^e + e` the formula has, for `0 <= t <= T`:
//!
//! * `st_t_i`: the machine is in the `i`-th state (sorted order) at step `t`
//! * `hd_t_c`: the head is on cell `c` at step `t` (`0 <= c <= T`)
//! * `tp_t_c_s`: cell `c` holds symbol `s` (`0`, `1`, or `b` for blank)
//!
//! Each group is exactly-one (one at-least-one clause plus pairwise
//! at-most-one clauses). Transitions are clauses of the form
//! `¬st ∨ ¬hd ∨ ¬tp ∨ (st' ∧ tp' ∧ hd') ∨ ...` with one conjunction per
//! applicable action; the accept state is made absorbing. Cells away from
//! the head keep their symbol. The final clause asks for the accept state
//! at some step.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::formula::{Formula, VarName};
use crate::machine::{time_bound, MachineDescription, Move, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReduceConfig {
    /// Largest clock bound `T` the tableau may be built for.
    pub max_steps: usize,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig { max_steps: 64 }
    }
}

fn sym_code(s: Symbol) -> char {
    match s {
        Symbol::Zero => '0',
        Symbol::One => '1',
        Symbol::Blank => 'b',
    }
}

struct Names {
    states: usize,
}

impl Names {
    fn state(&self, t: usize, i: usize) -> Formula {
        debug_assert!(i < self.states);
        var(format!("st_{t}_{i}"))
    }

    fn head(&self, t: usize, c: usize) -> Formula {
        var(format!("hd_{t}_{c}"))
    }

    fn cell(&self, t: usize, c: usize, s: Symbol) -> Formula {
        var(format!("tp_{t}_{c}_{}", sym_code(s)))
    }
}

fn var(name: String) -> Formula {
    Formula::var(VarName::free(&name).expect("tableau names are identifiers"))
}

fn neg(f: &Formula) -> Formula {
    Formula::not(f.clone())
}

fn clause(lits: Vec<Formula>) -> Formula {
    Formula::any(lits).expect("clauses are nonempty")
}

fn exactly_one(items: Vec<Formula>, out: &mut Vec<Formula>) {
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            out.push(clause(vec![neg(&items[i]), neg(&items[j])]));
        }
    }
    out.push(clause(items));
}

/// The base reduction: satisfiable iff `m` accepts `x` within its clock.
pub fn reduce_base(m: &MachineDescription, x: &BitString, cfg: ReduceConfig) -> Result<Formula> {
    let steps = time_bound(x.len(), m.clock())
        .filter(|&t| t <= cfg.max_steps)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "clock bound for |x| = {} exceeds {} steps",
                x.len(),
                cfg.max_steps
            ))
        })?;
    let states: Vec<&str> = m.states().iter().map(String::as_str).collect();
    let idx = |s: &str| states.binary_search(&s).expect("declared state");
    let accept = idx(m.accept());
    let n = Names {
        states: states.len(),
    };
    let cells = steps + 1;
    let mut out = Vec::new();

    // Initial configuration.
    out.push(n.state(0, idx(m.start())));
    out.push(n.head(0, 0));
    for c in 0..cells {
        let s = x
            .bits()
            .get(c)
            .map_or(Symbol::Blank, |&b| Symbol::from_bit(b));
        out.push(n.cell(0, c, s));
    }

    for t in 0..=steps {
        exactly_one((0..states.len()).map(|i| n.state(t, i)).collect(), &mut out);
        exactly_one((0..cells).map(|c| n.head(t, c)).collect(), &mut out);
        for c in 0..cells {
            exactly_one(Symbol::ALL.iter().map(|&s| n.cell(t, c, s)).collect(), &mut out);
        }
    }

    for t in 0..steps {
        for (qi, &q) in states.iter().enumerate() {
            for c in 0..cells {
                for s in Symbol::ALL {
                    let mut lits = vec![neg(&n.state(t, qi)), neg(&n.head(t, c)), neg(&n.cell(t, c, s))];
                    let moves: Vec<(usize, Symbol, Move)> = if qi == accept {
                        vec![(accept, s, Move::S)]
                    } else {
                        m.actions(q, s).map(|a| (idx(&a.next), a.write, a.mv)).collect()
                    };
                    for (next, write, mv) in moves {
                        let c2 = mv.apply(c);
                        if c2 >= cells {
                            continue;
                        }
                        lits.push(Formula::And(vec![
                            n.state(t + 1, next),
                            n.cell(t + 1, c, write),
                            n.head(t + 1, c2),
                        ]));
                    }
                    out.push(clause(lits));
                }
            }
        }
        for c in 0..cells {
            for s in Symbol::ALL {
                out.push(clause(vec![
                    n.head(t, c),
                    neg(&n.cell(t, c, s)),
                    n.cell(t + 1, c, s),
                ]));
            }
        }
    }

    out.push(clause((0..=steps).map(|t| n.state(t, accept)).collect()));
    Formula::and(out)
}
