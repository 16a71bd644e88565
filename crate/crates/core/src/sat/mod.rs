//! Satisfiability for [`Formula`] values.
//!
//! Formulas are translated with [`tseitin`] and handed to the internal
//! [`cdcl`] solver. [`solve_exhaustive`] is a truth-table oracle for small
//! formulas, kept independent of the CNF path.

pub mod cdcl;
mod cnf;

pub use cnf::{parse_dimacs, parse_origin_map, tseitin, CnfFormula};

use crate::error::{Error, Result};
use crate::formula::{Formula, IndexedFormula, PartialAssignment};
use cdcl::{Outcome, Solver};

pub const DEFAULT_CONFLICT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SatConfig {
    pub conflict_budget: u64,
}

impl Default for SatConfig {
    fn default() -> Self {
        SatConfig {
            conflict_budget: DEFAULT_CONFLICT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatStatus {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub status: SatStatus,
    /// Total assignment over the formula's variables when satisfiable.
    pub model: Option<PartialAssignment>,
    /// Set when some assumption named a variable absent from the formula.
    pub ignored_assumptions: bool,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        self.status == SatStatus::Sat
    }
}

pub fn solve(f: &Formula) -> Result<SatResult> {
    solve_with(f, SatConfig::default())
}

pub fn solve_with(f: &Formula, cfg: SatConfig) -> Result<SatResult> {
    Prepared::new(f, cfg).query(&PartialAssignment::new())
}

/// Same status as solving `f` with the assumptions substituted in; the
/// model also binds the assumed variables.
pub fn solve_assuming(f: &Formula, assumptions: &PartialAssignment) -> Result<SatResult> {
    solve_assuming_with(f, assumptions, SatConfig::default())
}

pub fn solve_assuming_with(
    f: &Formula,
    assumptions: &PartialAssignment,
    cfg: SatConfig,
) -> Result<SatResult> {
    Prepared::new(f, cfg).query(assumptions)
}

/// A formula translated once and queried many times. [`Prepared::query`]
/// starts from a fresh copy of the solver each time; a [`Session`] reuses
/// one.
#[derive(Debug, Clone)]
pub struct Prepared {
    cnf: CnfFormula,
    solver: Solver,
    cfg: SatConfig,
}

impl Prepared {
    pub fn new(f: &Formula, cfg: SatConfig) -> Self {
        let cnf = tseitin(f);
        let solver = Solver::new(cnf.num_vars, &cnf.clauses);
        Prepared { cnf, solver, cfg }
    }

    pub fn cnf(&self) -> &CnfFormula {
        &self.cnf
    }

    pub fn query(&self, assumptions: &PartialAssignment) -> Result<SatResult> {
        self.query_with_phase(assumptions, None)
    }

    /// `phase`, if given, is the preferred value for each original
    /// variable; auxiliaries keep the default.
    pub fn query_with_phase(
        &self,
        assumptions: &PartialAssignment,
        phase: Option<&PartialAssignment>,
    ) -> Result<SatResult> {
        self.session().query(assumptions, phase)
    }

    /// A solver that keeps what it learns across queries.
    pub fn session(&self) -> Session<'_> {
        Session {
            prep: self,
            solver: self.solver.clone(),
        }
    }
}

/// Repeated queries against one solver. Learnt clauses carry over, which
/// is sound because they follow from the formula alone.
#[derive(Debug, Clone)]
pub struct Session<'a> {
    prep: &'a Prepared,
    solver: Solver,
}

impl Session<'_> {
    fn dimacs(&self, v: &crate::formula::VarName, b: bool) -> Option<i32> {
        let i = *self.prep.cnf.origin_map.get(v)? as i32;
        Some(if b { i } else { -i })
    }

    /// Adds `v = b` as a permanent fact. The caller must know it is
    /// implied by the formula, or later answers change meaning.
    pub fn fix(&mut self, v: &crate::formula::VarName, b: bool) {
        if let Some(l) = self.dimacs(v, b) {
            self.solver.add_unit(l);
        }
    }

    /// `phase`, if given, replaces the preferred values of the variables
    /// it binds, and stays in effect for later queries.
    pub fn query(
        &mut self,
        assumptions: &PartialAssignment,
        phase: Option<&PartialAssignment>,
    ) -> Result<SatResult> {
        let cnf = &self.prep.cnf;
        if let Some(phase) = phase {
            let mut p = vec![false; cnf.num_vars as usize];
            for (v, b) in phase.iter() {
                if let Some(&i) = cnf.origin_map.get(v) {
                    p[i as usize - 1] = b;
                }
            }
            self.solver.set_phase(&p);
        }
        let mut ignored = false;
        let mut lits = Vec::with_capacity(assumptions.len());
        for (v, b) in assumptions.iter() {
            match self.dimacs(v, b) {
                Some(l) => lits.push(l),
                None => ignored = true,
            }
        }
        let outcome = self.solver.solve_under(&lits, self.prep.cfg.conflict_budget)?;
        Ok(match outcome {
            Outcome::Sat(values) => {
                let mut model: PartialAssignment = cnf
                    .origin_map
                    .iter()
                    .map(|(v, &i)| (v.clone(), values[i as usize - 1]))
                    .collect();
                for (v, b) in assumptions.iter() {
                    if !model.contains(v) {
                        model.bind(v.clone(), b);
                    }
                }
                SatResult {
                    status: SatStatus::Sat,
                    model: Some(model),
                    ignored_assumptions: ignored,
                }
            }
            Outcome::Unsat => SatResult {
                status: SatStatus::Unsat,
                model: None,
                ignored_assumptions: ignored,
            },
        })
    }
}

/// Solves a raw CNF (e.g. read from DIMACS). Returns the model over CNF
/// variables `1..=num_vars`.
pub fn solve_cnf(cnf: &CnfFormula, cfg: SatConfig) -> Result<Option<Vec<bool>>> {
    match Solver::new(cnf.num_vars, &cnf.clauses).solve(cfg.conflict_budget)? {
        Outcome::Sat(m) => Ok(Some(m)),
        Outcome::Unsat => Ok(None),
    }
}

/// Truth-table oracle: tries all `2^numvars` assignments in mask order.
pub fn solve_exhaustive(f: &Formula, max_vars: usize) -> Result<SatResult> {
    let ix = IndexedFormula::new(f);
    let n = ix.num_vars();
    if n > max_vars || n >= 64 {
        return Err(Error::LimitExceeded(format!(
            "{n} variables exceeds the exhaustive limit of {max_vars}"
        )));
    }
    let hit = (0..1u64 << n).find(|&mask| ix.eval_mask(mask));
    Ok(SatResult {
        status: if hit.is_some() { SatStatus::Sat } else { SatStatus::Unsat },
        model: hit.map(|mask| ix.mask_to_assignment(mask)),
        ignored_assumptions: false,
    })
}
