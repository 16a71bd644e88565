//! Exhaustive frozen-variable computation straight from the formula AST.
//!
//! Small formulas get a plain truth table. Larger ones are enumerated by a
//! case split that never expands a branch once its residual formula is
//! constant: a `true` residual stands for every completion of the
//! unassigned variables, a `false` residual for none. Disjunctions are
//! split into their disjuncts (the model set of an `or` is the union of its
//! children's model sets), and literals forced by the top-level conjunction
//! are assigned without branching. No CNF, no learning, no solver.

use crate::formula::indexed::Node;
use crate::formula::IndexedFormula;

const UNDEF: u8 = 2;

/// Which values each variable takes over all satisfying assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ValueSets {
    pub seen_false: Vec<bool>,
    pub seen_true: Vec<bool>,
}

impl ValueSets {
    fn new(n: usize) -> Self {
        ValueSets {
            seen_false: vec![false; n],
            seen_true: vec![false; n],
        }
    }

    pub fn satisfiable(&self) -> bool {
        self.seen_false.iter().zip(&self.seen_true).any(|(f, t)| *f || *t)
    }

    /// `Some(b)` if variable `i` is `b` in every model (and there is one).
    pub fn frozen(&self, i: usize) -> Option<bool> {
        match (self.seen_false[i], self.seen_true[i]) {
            (true, false) => Some(false),
            (false, true) => Some(true),
            _ => None,
        }
    }
}

pub(crate) fn truth_table(ix: &IndexedFormula) -> ValueSets {
    let n = ix.num_vars();
    assert!(n < 64);
    let mut vs = ValueSets::new(n);
    for mask in 0..1u64 << n {
        if ix.eval_mask(mask) {
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    vs.seen_true[i] = true;
                } else {
                    vs.seen_false[i] = true;
                }
            }
        }
    }
    vs
}

#[derive(Debug, Clone)]
enum Nnf {
    Lit(usize, bool),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn to_nnf(n: &Node, positive: bool) -> Nnf {
    match (n, positive) {
        (Node::Var(i), p) => Nnf::Lit(*i, p),
        (Node::Not(c), p) => to_nnf(c, !p),
        (Node::And(cs), true) | (Node::Or(cs), false) => {
            Nnf::And(cs.iter().map(|c| to_nnf(c, positive)).collect())
        }
        (Node::Or(cs), true) | (Node::And(cs), false) => {
            Nnf::Or(cs.iter().map(|c| to_nnf(c, positive)).collect())
        }
    }
}

enum Res {
    Const(bool),
    Node(Nnf),
}

fn simplify(n: &Nnf, assign: &[u8]) -> Res {
    match n {
        Nnf::Lit(v, p) => match assign[*v] {
            UNDEF => Res::Node(n.clone()),
            val => Res::Const((val == 1) == *p),
        },
        Nnf::And(cs) | Nnf::Or(cs) => {
            let is_or = matches!(n, Nnf::Or(_));
            let mut kept = Vec::with_capacity(cs.len());
            for c in cs {
                match simplify(c, assign) {
                    Res::Const(b) if b == is_or => return Res::Const(is_or),
                    Res::Const(_) => {}
                    Res::Node(m) => kept.push(m),
                }
            }
            match kept.len() {
                0 => Res::Const(!is_or),
                1 => Res::Node(kept.pop().unwrap()),
                _ if is_or => Res::Node(Nnf::Or(kept)),
                _ => Res::Node(Nnf::And(kept)),
            }
        }
    }
}

fn collect_units(n: &Nnf, out: &mut Vec<(usize, bool)>) {
    match n {
        Nnf::Lit(v, p) => out.push((*v, *p)),
        Nnf::And(cs) => cs.iter().for_each(|c| collect_units(c, out)),
        Nnf::Or(_) => {}
    }
}

fn leftmost_var(n: &Nnf) -> usize {
    match n {
        Nnf::Lit(v, _) => *v,
        Nnf::And(cs) | Nnf::Or(cs) => leftmost_var(&cs[0]),
    }
}

/// Raised when the search visits more nodes than allowed.
#[derive(Debug)]
pub(crate) struct OutOfBudget;

struct Search {
    vs: ValueSets,
    nodes: u64,
    budget: u64,
    /// Variables already seen with both values; the search stops once
    /// every variable is free since nothing more can change.
    both: usize,
}

impl Search {
    fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    fn done(&self) -> bool {
        self.both == self.vs.seen_true.len()
    }

    fn record(&mut self, assign: &[u8]) {
        for (i, &a) in assign.iter().enumerate() {
            let before = self.vs.seen_true[i] && self.vs.seen_false[i];
            if a != 0 {
                self.vs.seen_true[i] = true;
            }
            if a != 1 {
                self.vs.seen_false[i] = true;
            }
            if !before && self.vs.seen_true[i] && self.vs.seen_false[i] {
                self.both += 1;
            }
        }
    }

    fn explore(&mut self, mut node: Nnf, mut assign: Vec<u8>) -> Result<(), OutOfBudget> {
        loop {
            if self.done() {
                return Ok(());
            }
            self.tick()?;
            let mut units = Vec::new();
            collect_units(&node, &mut units);
            if units.is_empty() {
                break;
            }
            for (v, p) in units {
                let want = u8::from(p);
                match assign[v] {
                    UNDEF => assign[v] = want,
                    cur if cur == want => {}
                    _ => return Ok(()),
                }
            }
            match simplify(&node, &assign) {
                Res::Const(true) => {
                    self.record(&assign);
                    return Ok(());
                }
                Res::Const(false) => return Ok(()),
                Res::Node(n) => node = n,
            }
        }
        match node {
            Nnf::Or(children) => {
                for c in children {
                    self.explore(c, assign.clone())?;
                }
                Ok(())
            }
            other => {
                let v = leftmost_var(&other);
                for value in [0u8, 1] {
                    let mut a = assign.clone();
                    a[v] = value;
                    match simplify(&other, &a) {
                        Res::Const(true) => self.record(&a),
                        Res::Const(false) => {}
                        Res::Node(n) => self.explore(n, a)?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Case-split enumeration; visits at most `budget` search nodes.
pub(crate) fn case_split(ix: &IndexedFormula, budget: u64) -> Result<ValueSets, OutOfBudget> {
    let n = ix.num_vars();
    let mut s = Search {
        vs: ValueSets::new(n),
        nodes: 0,
        budget,
        both: 0,
    };
    s.explore(to_nnf(ix.root(), true), vec![UNDEF; n])?;
    Ok(s.vs)
}
