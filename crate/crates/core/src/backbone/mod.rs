//! Backbones: computing, verifying and extracting their values.
//!
//! A set `S` of variables is a backbone of `F` when exactly one assignment
//! `a_S` to `S` leaves `F[a_S]` satisfiable. The frozen variables (those
//! with the same value in every model) form the maximum backbone; every
//! subset of it is a backbone too. Unsatisfiable formulas have none.

mod brute;

use crate::error::{Error, Result};
use crate::formula::{Formula, IndexedFormula, PartialAssignment, VarName};
use crate::sat::{solve_with, Prepared, SatConfig};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub const DEFAULT_BRUTE_LIMIT: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackboneConfig {
    /// Formulas with at most this many variables get a full truth table;
    /// larger ones a pruned case split capped at `2^brute_limit` nodes.
    pub brute_limit: usize,
    pub sat: SatConfig,
}

impl Default for BackboneConfig {
    fn default() -> Self {
        BackboneConfig {
            brute_limit: DEFAULT_BRUTE_LIMIT,
            sat: SatConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Sat,
}

/// The maximum backbone with its value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrozenReport {
    pub frozen: BTreeMap<VarName, bool>,
    pub satisfiable: bool,
    pub method: Method,
}

impl FrozenReport {
    fn unsat(method: Method) -> Self {
        FrozenReport {
            frozen: BTreeMap::new(),
            satisfiable: false,
            method,
        }
    }

    /// `SAT`/`UNSAT` then one `frozen <var> <0|1>` line per variable in
    /// name order.
    pub fn to_text(&self) -> String {
        let mut out = String::from(if self.satisfiable { "SAT\n" } else { "UNSAT\n" });
        for (v, b) in &self.frozen {
            out.push_str(&format!("frozen {v} {}\n", u8::from(*b)));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn vars(&self) -> BTreeSet<VarName> {
        self.frozen.keys().cloned().collect()
    }

    pub fn value(&self) -> PartialAssignment {
        self.frozen.iter().map(|(v, b)| (v.clone(), *b)).collect()
    }
}

/// Frozen variables by exhaustive enumeration, without a SAT solver.
pub fn frozen_vars_brute(f: &Formula, cfg: BackboneConfig) -> Result<FrozenReport> {
    let ix = IndexedFormula::new(f);
    let n = ix.num_vars();
    let sets = if n <= cfg.brute_limit && n < 64 {
        brute::truth_table(&ix)
    } else {
        let budget = 1u64.checked_shl(cfg.brute_limit as u32).unwrap_or(u64::MAX);
        brute::case_split(&ix, budget).map_err(|_| {
            Error::LimitExceeded(format!(
                "{n} variables; case split exceeded 2^{} nodes",
                cfg.brute_limit
            ))
        })?
    };
    if !sets.satisfiable() {
        return Ok(FrozenReport::unsat(Method::Brute));
    }
    let frozen = ix
        .vars()
        .iter()
        .enumerate()
        .filter_map(|(i, v)| sets.frozen(i).map(|b| (v.clone(), b)))
        .collect();
    Ok(FrozenReport {
        frozen,
        satisfiable: true,
        method: Method::Brute,
    })
}

/// Frozen variables by SAT queries.
///
/// A first model `m` fixes the only candidate value for each variable; `v`
/// is frozen iff `F` with `v = ¬m(v)` is unsatisfiable. Queries prefer the
/// polarity opposite to `m`, and every model found rules out all variables
/// on which it disagrees with `m`. All queries share one solver, and each
/// variable proved frozen is added to it as a unit.
pub fn frozen_vars_sat(f: &Formula, cfg: BackboneConfig) -> Result<FrozenReport> {
    let prep = Prepared::new(f, cfg.sat);
    let mut session = prep.session();
    let first = session.query(&PartialAssignment::new(), None)?;
    let Some(model) = first.model else {
        return Ok(FrozenReport::unsat(Method::Sat));
    };
    let flipped: PartialAssignment = model.iter().map(|(v, b)| (v.clone(), !b)).collect();
    let mut candidate: BTreeMap<VarName, bool> =
        model.iter().map(|(v, b)| (v.clone(), b)).collect();
    let mut frozen = BTreeMap::new();
    let mut phase = Some(&flipped);
    for (v, b) in model.iter() {
        if !candidate.contains_key(v) {
            continue;
        }
        let probe = PartialAssignment::new().with(v.clone(), !b);
        let r = session.query(&probe, phase.take())?;
        match r.model {
            None => {
                candidate.remove(v);
                frozen.insert(v.clone(), b);
                session.fix(v, b);
            }
            Some(other) => {
                candidate.retain(|u, val| other.get(u) == Some(*val));
            }
        }
    }
    Ok(FrozenReport {
        frozen,
        satisfiable: true,
        method: Method::Sat,
    })
}

/// True iff `a` is the unique assignment to `vars` that keeps `f`
/// satisfiable. Uses two queries: `F[a]` satisfiable, and
/// `F ∧ ¬(conjunction of a)` unsatisfiable.
pub fn verify_backbone(
    f: &Formula,
    vars: &BTreeSet<VarName>,
    a: &PartialAssignment,
    cfg: BackboneConfig,
) -> Result<bool> {
    if a.domain() != *vars {
        return Err(Error::DomainMismatch);
    }
    let prep = Prepared::new(f, cfg.sat);
    if !prep.query(a)?.is_sat() {
        return Ok(false);
    }
    if a.is_empty() {
        return Ok(true);
    }
    let differs = Formula::any(a.iter().map(|(v, b)| Formula::lit(v.clone(), !b)).collect())?;
    let rest = Formula::And(vec![f.clone(), differs]);
    Ok(!solve_with(&rest, cfg.sat)?.is_sat())
}

/// The value of backbone `vars`: read off one model, then verified.
pub fn backbone_value(
    f: &Formula,
    vars: &BTreeSet<VarName>,
    cfg: BackboneConfig,
) -> Result<PartialAssignment> {
    let model = solve_with(f, cfg.sat)?.model.ok_or(Error::NotABackbone)?;
    let value = model.restrict(vars);
    if value.len() != vars.len() {
        // Some variable of `vars` does not occur in `f`, so it is free.
        return Err(Error::NotABackbone);
    }
    if verify_backbone(f, vars, &value, cfg)? {
        Ok(value)
    } else {
        Err(Error::NotABackbone)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn v(s: &str) -> VarName {
        s.parse().unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<VarName> {
        names.iter().map(|n| v(n)).collect()
    }

    const AND_NOT: &str = "(and (var x1) (not (var x2)))";
    const OR_NOT: &str = "(or (var x1) (not (var x2)))";
    const BOTH_TRUE: &str =
        "(and (or (var x1) (var x2)) (or (var x1) (not (var x2))) (or (not (var x1)) (var x2)))";

    #[test]
    fn frozen_examples_both_methods() {
        let cfg = BackboneConfig::default();
        for method in [frozen_vars_brute, frozen_vars_sat] {
            let r = method(&f(AND_NOT), cfg).unwrap();
            assert!(r.satisfiable);
            assert_eq!(r.value().bits(), "10");
            assert_eq!(r.vars(), set(&["x1", "x2"]));
            let r = method(&f(OR_NOT), cfg).unwrap();
            assert!(r.satisfiable && r.frozen.is_empty());
            let r = method(&f(BOTH_TRUE), cfg).unwrap();
            assert_eq!(r.value().bits(), "11");
            let r = method(&f("(and (var x1) (not (var x1)))"), cfg).unwrap();
            assert!(!r.satisfiable && r.frozen.is_empty());
        }
    }

    #[test]
    fn report_text() {
        let r = frozen_vars_brute(&f(AND_NOT), BackboneConfig::default()).unwrap();
        assert_eq!(r.to_text(), "SAT\nfrozen x1 1\nfrozen x2 0\n");
        let back: FrozenReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn verify_examples() {
        let cfg = BackboneConfig::default();
        let s = set(&["x1"]);
        let t = PartialAssignment::new().with(v("x1"), true);
        let fl = PartialAssignment::new().with(v("x1"), false);
        assert!(verify_backbone(&f(AND_NOT), &s, &t, cfg).unwrap());
        assert!(!verify_backbone(&f(AND_NOT), &s, &fl, cfg).unwrap());
        assert!(!verify_backbone(&f(OR_NOT), &s, &t, cfg).unwrap());
        assert!(!verify_backbone(&f(OR_NOT), &s, &fl, cfg).unwrap());
        assert_eq!(
            verify_backbone(&f(AND_NOT), &set(&["x2"]), &t, cfg),
            Err(Error::DomainMismatch)
        );
    }

    #[test]
    fn value_examples() {
        let cfg = BackboneConfig::default();
        let val = backbone_value(&f(AND_NOT), &set(&["x1", "x2"]), cfg).unwrap();
        assert_eq!(val.bits(), "10");
        let empty = backbone_value(&f(AND_NOT), &BTreeSet::new(), cfg).unwrap();
        assert!(empty.is_empty());
        assert_eq!(
            backbone_value(&f(OR_NOT), &set(&["x1"]), cfg),
            Err(Error::NotABackbone)
        );
        assert_eq!(
            backbone_value(&f(AND_NOT), &set(&["x9"]), cfg),
            Err(Error::NotABackbone)
        );
    }

    #[test]
    fn large_brute_uses_case_split() {
        // 30 independent frozen variables: too many for a truth table.
        let lits: Vec<String> = (1..=30).map(|i| format!("(var a{i})")).collect();
        let g = f(&format!("(and {})", lits.join(" ")));
        let r = frozen_vars_brute(&g, BackboneConfig::default()).unwrap();
        assert_eq!(r.frozen.len(), 30);
        // Pairs of disjunctions force real branching.
        let pairs: Vec<String> = (1..=30)
            .map(|i| format!("(or (var a{i}) (var b{i}))"))
            .collect();
        let h = f(&format!("(and {})", pairs.join(" ")));
        let tight = BackboneConfig {
            brute_limit: 3,
            ..Default::default()
        };
        assert!(matches!(frozen_vars_brute(&h, tight), Err(Error::LimitExceeded(_))));
    }
}
