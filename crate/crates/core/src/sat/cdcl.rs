//! Conflict-driven clause learning over two watched literals.
//!
//! Deliberately plain: first-unassigned-variable branching, a fixed phase
//! per variable (false unless told otherwise), first-UIP learning, no
//! restarts and no clause deletion. Runs are fully deterministic.

use crate::error::{Error, Result};

const UNDEF: u8 = 2;

#[inline]
fn lit_of(dimacs: i32) -> u32 {
    let v = dimacs.unsigned_abs() - 1;
    2 * v + u32::from(dimacs < 0)
}

#[inline]
fn var(l: u32) -> usize {
    (l >> 1) as usize
}

#[inline]
fn neg(l: u32) -> u32 {
    l ^ 1
}

#[derive(Debug, Clone)]
pub struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<u32>>,
    watches: Vec<Vec<usize>>,
    /// Per variable: 0 false, 1 true, UNDEF.
    values: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    next_decision: usize,
    phase: Vec<bool>,
    seen: Vec<bool>,
    /// Set once a contradiction is derived at level 0.
    inconsistent: bool,
    conflicts: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Model indexed by variable (`model[v - 1]` for DIMACS variable `v`).
    Sat(Vec<bool>),
    Unsat,
}

impl Solver {
    pub fn new(num_vars: u32, clauses: &[Vec<i32>]) -> Self {
        let n = num_vars as usize;
        let mut s = Solver {
            num_vars: n,
            clauses: Vec::with_capacity(clauses.len()),
            watches: vec![Vec::new(); 2 * n],
            values: vec![UNDEF; n],
            level: vec![0; n],
            reason: vec![None; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            next_decision: 0,
            phase: vec![false; n],
            seen: vec![false; n],
            inconsistent: false,
            conflicts: 0,
        };
        for c in clauses {
            let mut lits: Vec<u32> = c.iter().map(|&l| lit_of(l)).collect();
            lits.sort_unstable();
            lits.dedup();
            if lits.windows(2).any(|w| w[0] == neg(w[1])) {
                continue;
            }
            s.add_root_clause(lits);
        }
        s
    }

    /// Preferred polarity per variable, used when branching.
    pub fn set_phase(&mut self, phase: &[bool]) {
        for (p, &b) in self.phase.iter_mut().zip(phase) {
            *p = b;
        }
    }

    /// Adds a clause before search starts. Literals must be distinct and
    /// non-complementary.
    fn add_root_clause(&mut self, lits: Vec<u32>) {
        if self.inconsistent {
            return;
        }
        match lits.len() {
            0 => self.inconsistent = true,
            1 => self.assume_root(lits[0]),
            _ => {
                let ci = self.clauses.len();
                self.watches[lits[0] as usize].push(ci);
                self.watches[lits[1] as usize].push(ci);
                self.clauses.push(lits);
            }
        }
    }

    fn assume_root(&mut self, l: u32) {
        match self.lit_value(l) {
            1 => {}
            0 => self.inconsistent = true,
            _ => self.enqueue(l, None),
        }
    }

    /// Adds a unit clause (DIMACS literal).
    pub fn add_unit(&mut self, dimacs: i32) {
        assert!(self.trail_lim.is_empty(), "units only at the root");
        if !self.inconsistent {
            self.assume_root(lit_of(dimacs));
        }
    }

    #[inline]
    fn lit_value(&self, l: u32) -> u8 {
        let v = self.values[var(l)];
        if v == UNDEF {
            UNDEF
        } else {
            v ^ (l & 1) as u8
        }
    }

    #[inline]
    fn enqueue(&mut self, l: u32, reason: Option<usize>) {
        let v = var(l);
        self.values[v] = 1 ^ (l & 1) as u8;
        self.level[v] = self.trail_lim.len() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause if one is found.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let clause = &mut self.clauses[ci];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.values[var(first)] != UNDEF
                    && self.values[var(first)] ^ (first & 1) as u8 == 1
                {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let val = self.values[var(l)];
                    if val == UNDEF || val ^ (l & 1) as u8 == 1 {
                        clause.swap(1, k);
                        self.watches[clause[1] as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                match self.lit_value(first) {
                    0 => {
                        conflict = Some(ci);
                        while i < ws.len() {
                            ws[j] = ws[i];
                            j += 1;
                            i += 1;
                        }
                    }
                    _ => self.enqueue(first, Some(ci)),
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// First-UIP analysis; returns the learnt clause (asserting literal
    /// first) and the backjump level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<u32>, u32) {
        let current = self.trail_lim.len() as u32;
        let mut learnt = vec![0u32];
        let mut pending = 0usize;
        let mut idx = self.trail.len();
        let mut implied: Option<u32> = None;
        loop {
            let start = usize::from(implied.is_some());
            for k in start..self.clauses[confl].len() {
                let q = self.clauses[confl][k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            let p = loop {
                idx -= 1;
                let p = self.trail[idx];
                if self.seen[var(p)] {
                    break p;
                }
            };
            self.seen[var(p)] = false;
            pending -= 1;
            if pending == 0 {
                learnt[0] = neg(p);
                break;
            }
            implied = Some(p);
            confl = self.reason[var(p)].expect("implied literal has a reason");
        }
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[var(learnt[k])] > self.level[var(learnt[best])] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            bt = self.level[var(learnt[1])];
        }
        (learnt, bt)
    }

    fn backtrack(&mut self, to: u32) {
        if self.trail_lim.len() as u32 <= to {
            return;
        }
        let keep = self.trail_lim[to as usize];
        for &l in &self.trail[keep..] {
            let v = var(l);
            self.values[v] = UNDEF;
            self.reason[v] = None;
            if v < self.next_decision {
                self.next_decision = v;
            }
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(to as usize);
        self.qhead = keep;
    }

    fn pick_branch(&mut self) -> Option<u32> {
        while self.next_decision < self.num_vars {
            let v = self.next_decision;
            if self.values[v] == UNDEF {
                return Some(2 * v as u32 + u32::from(!self.phase[v]));
            }
            self.next_decision += 1;
        }
        None
    }

    pub fn conflicts(&self) -> u64 {
        self.conflicts
    }

    /// Runs the search to completion or until `conflict_budget` conflicts.
    pub fn solve(&mut self, conflict_budget: u64) -> Result<Outcome> {
        self.solve_under(&[], conflict_budget)
    }

    /// Search with `assumptions` (DIMACS literals) taken as the first
    /// decisions. `Unsat` then means unsatisfiable under the assumptions.
    /// Learnt clauses are kept, so the solver can be queried again; it is
    /// back at the root whenever this returns.
    pub fn solve_under(&mut self, assumptions: &[i32], conflict_budget: u64) -> Result<Outcome> {
        let r = self.search(assumptions, conflict_budget);
        self.backtrack(0);
        r
    }

    fn search(&mut self, assumptions: &[i32], conflict_budget: u64) -> Result<Outcome> {
        if self.inconsistent {
            return Ok(Outcome::Unsat);
        }
        let start = self.conflicts;
        'search: loop {
            if let Some(confl) = self.propagate() {
                if self.trail_lim.is_empty() {
                    self.inconsistent = true;
                    return Ok(Outcome::Unsat);
                }
                self.conflicts += 1;
                if self.conflicts - start > conflict_budget {
                    return Err(Error::ConflictBudget(conflict_budget));
                }
                let (learnt, bt) = self.analyze(confl);
                self.backtrack(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let ci = self.clauses.len();
                    self.watches[learnt[0] as usize].push(ci);
                    self.watches[learnt[1] as usize].push(ci);
                    let asserting = learnt[0];
                    self.clauses.push(learnt);
                    self.enqueue(asserting, Some(ci));
                }
                continue;
            }
            while self.trail_lim.len() < assumptions.len() {
                let a = lit_of(assumptions[self.trail_lim.len()]);
                match self.lit_value(a) {
                    // Already true: an empty level keeps levels aligned.
                    1 => self.trail_lim.push(self.trail.len()),
                    0 => return Ok(Outcome::Unsat),
                    _ => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(a, None);
                        continue 'search;
                    }
                }
            }
            match self.pick_branch() {
                Some(l) => {
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(l, None);
                }
                None => {
                    let model = self.values.iter().map(|&v| v == 1).collect();
                    return Ok(Outcome::Sat(model));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(n: u32, clauses: &[&[i32]]) -> Outcome {
        let cs: Vec<Vec<i32>> = clauses.iter().map(|c| c.to_vec()).collect();
        Solver::new(n, &cs).solve(u64::MAX).unwrap()
    }

    fn check(clauses: &[&[i32]], model: &[bool]) -> bool {
        clauses.iter().all(|c| {
            c.iter()
                .any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(run(1, &[&[1], &[-1]]), Outcome::Unsat);
        assert_eq!(run(2, &[]), Outcome::Sat(vec![false, false]));
        assert_eq!(run(2, &[&[1, -1]]), Outcome::Sat(vec![false, false]));
    }

    #[test]
    fn unique_model() {
        let cs: &[&[i32]] = &[&[1, 2], &[1, -2], &[-1, 2]];
        assert_eq!(run(2, cs), Outcome::Sat(vec![true, true]));
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // p(i,h) = 2*i + h + 1
        let p = |i: i32, h: i32| 2 * i + h + 1;
        let mut cs: Vec<Vec<i32>> = (0..3).map(|i| vec![p(i, 0), p(i, 1)]).collect();
        for h in 0..2 {
            for i in 0..3 {
                for j in i + 1..3 {
                    cs.push(vec![-p(i, h), -p(j, h)]);
                }
            }
        }
        let mut s = Solver::new(6, &cs);
        assert_eq!(s.solve(u64::MAX).unwrap(), Outcome::Unsat);
        assert!(s.conflicts() > 0);
    }

    #[test]
    fn budget_is_reported() {
        let p = |i: i32, h: i32| 3 * i + h + 1;
        let mut cs: Vec<Vec<i32>> = (0..4).map(|i| vec![p(i, 0), p(i, 1), p(i, 2)]).collect();
        for h in 0..3 {
            for i in 0..4 {
                for j in i + 1..4 {
                    cs.push(vec![-p(i, h), -p(j, h)]);
                }
            }
        }
        let r = Solver::new(12, &cs).solve(1);
        assert_eq!(r, Err(Error::ConflictBudget(1)));
    }

    #[test]
    fn phase_steers_the_model() {
        let mut s = Solver::new(3, &[vec![1, 2, 3]]);
        s.set_phase(&[true, true, true]);
        assert_eq!(s.solve(10).unwrap(), Outcome::Sat(vec![true, true, true]));
    }

    #[test]
    fn assumptions_are_incremental() {
        // x1 -> x2, x2 -> x3
        let mut s = Solver::new(3, &[vec![-1, 2], vec![-2, 3]]);
        assert_eq!(s.solve_under(&[1, -3], 100).unwrap(), Outcome::Unsat);
        assert_eq!(
            s.solve_under(&[1], 100).unwrap(),
            Outcome::Sat(vec![true, true, true])
        );
        assert_eq!(s.solve_under(&[-3], 100).unwrap(), Outcome::Sat(vec![false, false, false]));
        assert_eq!(s.solve_under(&[2, 2], 100).unwrap(), Outcome::Sat(vec![false, true, true]));
        s.add_unit(-3);
        assert_eq!(s.solve_under(&[1], 100).unwrap(), Outcome::Unsat);
        assert_eq!(s.solve(100).unwrap(), Outcome::Sat(vec![false, false, false]));
    }

    #[test]
    fn random_3sat_models_are_valid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(3..12);
            let m = rng.gen_range(1..(5 * n));
            let cs: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.gen_range(1..=n) as i32;
                            if rng.gen() { v } else { -v }
                        })
                        .collect()
                })
                .collect();
            let refs: Vec<&[i32]> = cs.iter().map(|c| c.as_slice()).collect();
            let brute = (0..1u32 << n).any(|mask| {
                let model: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                check(&refs, &model)
            });
            match Solver::new(n, &cs).solve(u64::MAX).unwrap() {
                Outcome::Sat(model) => {
                    assert!(brute);
                    assert!(check(&refs, &model));
                }
                Outcome::Unsat => assert!(!brute),
            }
            let mut inc = Solver::new(n, &cs);
            for _ in 0..5 {
                let assume: Vec<i32> = (0..rng.gen_range(0..4))
                    .map(|_| {
                        let v = rng.gen_range(1..=n) as i32;
                        if rng.gen() { v } else { -v }
                    })
                    .collect();
                let ok = |model: &[bool]| {
                    check(&refs, model)
                        && assume.iter().all(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0))
                };
                let brute = (0..1u32 << n).any(|mask| {
                    let model: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                    ok(&model)
                });
                match inc.solve_under(&assume, u64::MAX).unwrap() {
                    Outcome::Sat(model) => assert!(brute && ok(&model)),
                    Outcome::Unsat => assert!(!brute),
                }
            }
        }
    }
}
