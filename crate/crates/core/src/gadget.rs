//! Gadget formula families built from two reduction outputs.
//!
//! For machines `Mi`, `Mj` and input `x`, with `L = reduce(Mi, x)` and
//! `R = reduce(Mj, x)`:
//!
//! * `a3k`: `(z.1 ∧ … ∧ z.k ∧ L) ∨ (¬z.1 ∧ … ∧ ¬z.k ∧ R)`
//! * `thm3`: `(z.1 ∧ … ∧ z.m ∧ L) ∨ (¬zp.1 ∧ … ∧ ¬zp.m ∧ R)`, where `m` is
//!   large enough that the z-block alone makes up at least `(50−ε)%` of the
//!   variables.
//!
//! When exactly one of `Mi`, `Mj` accepts `x`, exactly one disjunct is
//! satisfiable and the z-values announce which.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::formula::{Formula, PartialAssignment, VarKind, VarName};
use crate::machine::{accepts, MachineDescription, MachineTag};
use crate::reduction::{invert, reduce_with, Inverted, ReduceConfig};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub type Epsilon = Ratio<u64>;

/// Parses `a/b` or an integer; must lie in `(0, 1]`.
pub fn parse_epsilon(s: &str) -> Result<Epsilon> {
    let e: Epsilon = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParams(format!("epsilon `{s}` is not a rational")))?;
    check_epsilon(e)?;
    Ok(e)
}

fn check_epsilon(e: Epsilon) -> Result<()> {
    if *e.numer() == 0 || e > Epsilon::from_integer(1) {
        return Err(Error::InvalidParams(format!("epsilon {e} outside (0, 1]")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyParams {
    A3k { k: usize },
    Thm3 { epsilon: Epsilon },
}

#[derive(Debug, Clone)]
pub struct ConstructionParams {
    pub machine_i: MachineDescription,
    pub machine_j: MachineDescription,
    pub family: FamilyParams,
    pub reduce: ReduceConfig,
}

impl ConstructionParams {
    pub fn new(
        machine_i: MachineDescription,
        machine_j: MachineDescription,
        family: FamilyParams,
    ) -> Result<Self> {
        if machine_i.tag() == machine_j.tag() {
            return Err(Error::InvalidParams("the two machines have the same tag".into()));
        }
        match family {
            FamilyParams::A3k { k: 0 } => {
                return Err(Error::InvalidParams("k must be positive".into()))
            }
            FamilyParams::Thm3 { epsilon } => check_epsilon(epsilon)?,
            _ => {}
        }
        Ok(ConstructionParams {
            machine_i,
            machine_j,
            family,
            reduce: ReduceConfig::default(),
        })
    }

    pub fn a3k(mi: MachineDescription, mj: MachineDescription, k: usize) -> Result<Self> {
        Self::new(mi, mj, FamilyParams::A3k { k })
    }

    pub fn thm3(mi: MachineDescription, mj: MachineDescription, epsilon: Epsilon) -> Result<Self> {
        Self::new(mi, mj, FamilyParams::Thm3 { epsilon })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A3k { k: usize },
    Thm3 { epsilon: Epsilon, m: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::A3k { .. } => "a3k",
            Family::Thm3 { .. } => "thm3",
        }
    }

    /// Length of each z-block (`k` or `m`).
    pub fn block_len(&self) -> usize {
        match *self {
            Family::A3k { k } => k,
            Family::Thm3 { m, .. } => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub formula: Formula,
    pub x: BitString,
    pub family: Family,
    pub tag_i: MachineTag,
    pub tag_j: MachineTag,
    /// Variables of the embedded `L` (reduction for `Mi`).
    pub left_vars: BTreeSet<VarName>,
    /// Variables of the embedded `R` (reduction for `Mj`).
    pub right_vars: BTreeSet<VarName>,
}

/// Sidecar metadata for a serialized gadget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetMeta {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    pub x: BitString,
    pub tag_i: String,
    pub tag_j: String,
}

impl GadgetMeta {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serializes")
    }
}

impl GadgetInstance {
    /// `{z.1, …, z.n}` for the family's block length `n`.
    pub fn z_block(&self) -> BTreeSet<VarName> {
        (1..=self.family.block_len()).map(VarName::z).collect()
    }

    /// `{zp.1, …, zp.m}`; empty for `a3k`.
    pub fn zp_block(&self) -> BTreeSet<VarName> {
        match self.family {
            Family::Thm3 { m, .. } => (1..=m).map(VarName::zp).collect(),
            Family::A3k { .. } => BTreeSet::new(),
        }
    }

    pub fn numvars(&self) -> usize {
        self.left_vars.len() + self.right_vars.len() + self.z_block().len() + self.zp_block().len()
    }

    pub fn meta(&self) -> GadgetMeta {
        let (k, epsilon, m) = match self.family {
            Family::A3k { k } => (Some(k), None, None),
            Family::Thm3 { epsilon, m } => (None, Some(epsilon.to_string()), Some(m)),
        };
        GadgetMeta {
            family: self.family.name().into(),
            k,
            epsilon,
            m,
            x: self.x.clone(),
            tag_i: self.tag_i.to_string(),
            tag_j: self.tag_j.to_string(),
        }
    }
}

/// Least `m ≥ 1` with `m / (v_i + v_j + 2m) ≥ (50 − ε)/100`.
pub fn compute_m(v_i: usize, v_j: usize, epsilon: Epsilon) -> Result<usize> {
    check_epsilon(epsilon)?;
    let v = (v_i + v_j) as u128;
    let (a, b) = (*epsilon.numer() as u128, *epsilon.denom() as u128);
    // m ≥ (50b − a)·v / (2a), rounded up.
    let seed = ((50 * b - a) * v).div_ceil(2 * a).max(1);
    let mut m = usize::try_from(seed).map_err(|_| Error::InvalidParams("m overflows".into()))?;
    while m > 1 && m_satisfies(m - 1, v_i + v_j, epsilon) {
        m -= 1;
    }
    while !m_satisfies(m, v_i + v_j, epsilon) {
        m += 1;
    }
    Ok(m)
}

/// `m / (v + 2m) ≥ (50 − ε)/100`, in exact arithmetic.
pub fn m_satisfies(m: usize, v: usize, epsilon: Epsilon) -> bool {
    let (a, b) = (*epsilon.numer() as u128, *epsilon.denom() as u128);
    let (m, v) = (m as u128, v as u128);
    // 100·m·b ≥ (50b − a)·(v + 2m)
    100 * m * b >= (50 * b - a) * (v + 2 * m)
}

fn z_block_formula(n: usize, primed: bool, positive: bool) -> Vec<Formula> {
    (1..=n)
        .map(|i| {
            let v = if primed { VarName::zp(i) } else { VarName::z(i) };
            Formula::lit(v, positive)
        })
        .collect()
}

fn assemble(
    left: Formula,
    right: Formula,
    n: usize,
    right_primed: bool,
) -> Formula {
    let mut a = z_block_formula(n, false, true);
    a.push(left);
    let mut b = z_block_formula(n, right_primed, false);
    b.push(right);
    Formula::Or(vec![Formula::And(a), Formula::And(b)])
}

fn check_complementary(params: &ConstructionParams, x: &BitString) -> Result<()> {
    if accepts(&params.machine_i, x)? == accepts(&params.machine_j, x)? {
        return Err(Error::NotComplementary(x.to_string()));
    }
    Ok(())
}

/// Builds the family member for `x`. Fails if the machines do not split
/// `x` between them.
pub fn build(params: &ConstructionParams, x: &BitString) -> Result<GadgetInstance> {
    check_complementary(params, x)?;
    let l = reduce_with(&params.machine_i, x, params.reduce)?;
    let r = reduce_with(&params.machine_j, x, params.reduce)?;
    let left_vars = l.formula.vars();
    let right_vars = r.formula.vars();
    let (family, formula) = match params.family {
        FamilyParams::A3k { k } => (Family::A3k { k }, assemble(l.formula, r.formula, k, false)),
        FamilyParams::Thm3 { epsilon } => {
            let m = compute_m(left_vars.len(), right_vars.len(), epsilon)?;
            (Family::Thm3 { epsilon, m }, assemble(l.formula, r.formula, m, true))
        }
    };
    Ok(GadgetInstance {
        formula,
        x: x.clone(),
        family,
        tag_i: l.machine_tag,
        tag_j: r.machine_tag,
        left_vars,
        right_vars,
    })
}

pub fn build_a3k(params: &ConstructionParams, x: &BitString) -> Result<GadgetInstance> {
    match params.family {
        FamilyParams::A3k { .. } => build(params, x),
        _ => Err(Error::WrongFamily { expected: "a3k" }),
    }
}

pub fn build_thm3(params: &ConstructionParams, x: &BitString) -> Result<GadgetInstance> {
    match params.family {
        FamilyParams::Thm3 { .. } => build(params, x),
        _ => Err(Error::WrongFamily { expected: "thm3" }),
    }
}

/// `{z.1, …, z.k}`: a size-`k` backbone of every `a3k` member, read off
/// the construction with no solving.
pub fn f_backbone(g: &GadgetInstance) -> Result<BTreeSet<VarName>> {
    match g.family {
        Family::A3k { .. } => Ok(g.z_block()),
        Family::Thm3 { .. } => Err(Error::WrongFamily { expected: "a3k" }),
    }
}

/// Splits a side `(lit_1 ∧ … ∧ lit_n ∧ G)` into the z-literals and `G`.
/// Every leading child must be a z-series literal of the given series and
/// sign with indices `1..=n` in order.
fn split_side(side: &Formula, primed: bool, positive: bool) -> Option<(usize, &Formula)> {
    let Formula::And(cs) = side else { return None };
    let (last, lits) = cs.split_last()?;
    for (i, c) in lits.iter().enumerate() {
        let (v, pos) = c.as_literal()?;
        match v.kind() {
            VarKind::Z { primed: p, index } if *p == primed && *index == i + 1 && pos == positive => {}
            _ => return None,
        }
    }
    Some((lits.len(), last))
}

/// True iff `y` is exactly the family member for some `x`.
///
/// Checks the shape and block length, decodes both embedded reductions,
/// requires matching inputs and the expected machine tags, then rebuilds
/// both reductions and compares them with the embedded subformulas.
pub fn membership_test(y: &Formula, params: &ConstructionParams) -> bool {
    member_input(y, params).is_some()
}

/// The `x` whose gadget `y` is, if any.
pub fn member_input(y: &Formula, params: &ConstructionParams) -> Option<BitString> {
    let Formula::Or(sides) = y else { return None };
    let [left, right] = sides.as_slice() else { return None };
    let primed = matches!(params.family, FamilyParams::Thm3 { .. });
    let (n, l) = split_side(left, false, true)?;
    let (n2, r) = split_side(right, primed, false)?;
    if n != n2 || n == 0 {
        return None;
    }
    if let FamilyParams::A3k { k } = params.family {
        if n != k {
            return None;
        }
    }
    let (Inverted::Pair { tag: ti, input: xi }, Inverted::Pair { tag: tj, input: xj }) =
        (invert(l), invert(r))
    else {
        return None;
    };
    if xi != xj || ti != params.machine_i.tag() || tj != params.machine_j.tag() {
        return None;
    }
    let li = reduce_with(&params.machine_i, &xi, params.reduce).ok()?;
    let rj = reduce_with(&params.machine_j, &xi, params.reduce).ok()?;
    if li.formula != *l || rj.formula != *r {
        return None;
    }
    if let FamilyParams::Thm3 { epsilon } = params.family {
        let m = compute_m(li.formula.numvars(), rj.formula.numvars(), epsilon).ok()?;
        if n != m {
            return None;
        }
    }
    Some(xi)
}

/// Reads a membership claim for `x ∈ L(Mi)` off a backbone value.
///
/// All bound `z.ℓ` true means member. All bound `z.ℓ` false (`a3k`) or all
/// bound `zp.ℓ` false (`thm3`) means non-member. Anything else, including
/// an answer with no z-series variables, is inconsistent.
pub fn read_backbone_value(family: Family, value: &PartialAssignment) -> Result<bool> {
    let mut z = Vec::new();
    let mut zp = Vec::new();
    for (v, b) in value.iter() {
        if let VarKind::Z { primed, .. } = v.kind() {
            if *primed { zp.push(b) } else { z.push(b) }
        }
    }
    let all = |xs: &[bool], b: bool| !xs.is_empty() && xs.iter().all(|&x| x == b);
    match family {
        Family::A3k { .. } if zp.is_empty() => {
            if all(&z, true) {
                Ok(true)
            } else if all(&z, false) {
                Ok(false)
            } else {
                Err(Error::InconsistentOracle)
            }
        }
        Family::Thm3 { .. } if zp.is_empty() && all(&z, true) => Ok(true),
        Family::Thm3 { .. } if z.is_empty() && all(&zp, false) => Ok(false),
        _ => Err(Error::InconsistentOracle),
    }
}

/// Builds the gadget for `x`, asks `oracle` for a backbone value, and
/// turns the answer into a claim about `x ∈ L(Mi)`.
pub fn decide_via_backbone_value<O>(
    params: &ConstructionParams,
    x: &BitString,
    oracle: O,
) -> Result<bool>
where
    O: FnOnce(&GadgetInstance) -> Result<PartialAssignment>,
{
    let g = build(params, x)?;
    let value = oracle(&g)?;
    read_backbone_value(g.family, &value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Some `z.ℓ` is in the backbone: `x ∈ L(Mi)`.
    Left,
    /// Some `zp.ℓ` is in the backbone: `x ∈ L(Mj)`.
    Right,
    /// Both series present, or no z-series variable in a set too large to
    /// fit outside them.
    Impossible,
    /// No z-series variable and small enough to fit among the reduction
    /// variables; nothing to conclude.
    Inconclusive,
}

/// Case analysis on a backbone `s` of a `thm3` gadget.
pub fn classify_backbone_side(g: &GadgetInstance, s: &BTreeSet<VarName>) -> Result<Side> {
    let Family::Thm3 { epsilon, .. } = g.family else {
        return Err(Error::WrongFamily { expected: "thm3" });
    };
    let has = |primed: bool| {
        s.iter()
            .any(|v| matches!(v.kind(), VarKind::Z { primed: p, .. } if *p == primed))
    };
    Ok(match (has(false), has(true)) {
        (true, true) => Side::Impossible,
        (true, false) => Side::Left,
        (false, true) => Side::Right,
        (false, false) => {
            // |S| ≥ (2ε/100)·numvars
            let lhs = Ratio::from_integer(s.len() as u64) * Ratio::from_integer(100u64);
            let rhs = epsilon * Ratio::from_integer(2 * g.numvars() as u64);
            if lhs >= rhs {
                Side::Impossible
            } else {
                Side::Inconclusive
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backbone::{backbone_value, frozen_vars_brute, verify_backbone, BackboneConfig};
    use crate::formula::parse_formula;
    use crate::machine::{all1, lastbit0, lastbit1};
    use crate::sat::{solve, solve_assuming};

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn a3k(k: usize) -> ConstructionParams {
        ConstructionParams::a3k(lastbit0(), lastbit1(), k).unwrap()
    }

    fn thm3(e: &str) -> ConstructionParams {
        ConstructionParams::thm3(lastbit0(), lastbit1(), parse_epsilon(e).unwrap()).unwrap()
    }

    fn scan_m(v: usize, e: Epsilon) -> usize {
        (1..).find(|&m| m_satisfies(m, v, e)).unwrap()
    }

    #[test]
    fn compute_m_spot_values() {
        let one = parse_epsilon("1").unwrap();
        assert_eq!(compute_m(1, 1, one).unwrap(), 49);
        assert_eq!(compute_m(50, 50, one).unwrap(), 2450);
        assert!(!m_satisfies(48, 2, one));
        for v in 2..300 {
            for e in ["1", "1/2", "1/3", "7/10"] {
                let e = parse_epsilon(e).unwrap();
                assert_eq!(compute_m(v / 2, v - v / 2, e).unwrap(), scan_m(v, e), "v={v} e={e}");
            }
        }
    }

    #[test]
    fn epsilon_range() {
        assert!(parse_epsilon("0").is_err());
        assert!(parse_epsilon("3/2").is_err());
        assert!(parse_epsilon("x").is_err());
        assert_eq!(parse_epsilon("2/4").unwrap(), Epsilon::new(1, 2));
    }

    #[test]
    fn a3k_examples() {
        let cfg = BackboneConfig::default();
        let g = build_a3k(&a3k(1), &b("10")).unwrap();
        let r = frozen_vars_brute(&g.formula, cfg).unwrap();
        assert_eq!(r.frozen.get(&VarName::z(1)), Some(&true));
        let g = build_a3k(&a3k(1), &b("11")).unwrap();
        let r = frozen_vars_brute(&g.formula, cfg).unwrap();
        assert_eq!(r.frozen.get(&VarName::z(1)), Some(&false));
        let v = backbone_value(&g.formula, &f_backbone(&g).unwrap(), cfg).unwrap();
        assert_eq!(v.bits(), "0");
        let g = build_a3k(&a3k(3), &b("10")).unwrap();
        let fb = f_backbone(&g).unwrap();
        assert_eq!(fb.len(), 3);
        let v = backbone_value(&g.formula, &fb, cfg).unwrap();
        assert_eq!(v.bits(), "111");
    }

    #[test]
    fn shape_and_metadata() {
        let g = build_a3k(&a3k(2), &b("0")).unwrap();
        assert!(g.left_vars.is_disjoint(&g.right_vars));
        assert!(g.left_vars.iter().chain(&g.right_vars).all(|v| !v.is_z_series()));
        assert_eq!(g.numvars(), g.formula.numvars());
        let meta = g.meta();
        assert_eq!((meta.family.as_str(), meta.k, meta.m), ("a3k", Some(2), None));
        let t = build_thm3(&thm3("1"), &b("0")).unwrap();
        assert_eq!(t.numvars(), t.formula.numvars());
        assert_eq!(t.meta().epsilon.as_deref(), Some("1"));
        assert!(matches!(f_backbone(&t), Err(Error::WrongFamily { .. })));
        assert!(matches!(build_a3k(&thm3("1"), &b("0")), Err(Error::WrongFamily { .. })));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ConstructionParams::a3k(lastbit0(), lastbit0(), 1).is_err());
        assert!(ConstructionParams::a3k(lastbit0(), lastbit1(), 0).is_err());
        // all1 and lastbit1 both accept "1".
        let p = ConstructionParams::a3k(all1(), lastbit1(), 1).unwrap();
        assert!(matches!(build(&p, &b("1")), Err(Error::NotComplementary(_))));
    }

    #[test]
    fn thm3_designated_backbones() {
        let cfg = BackboneConfig::default();
        let p = thm3("1");
        let g = build_thm3(&p, &b("10")).unwrap();
        let z = g.z_block();
        let val = backbone_value(&g.formula, &z, cfg).unwrap();
        assert!(val.iter().all(|(_, b)| b));
        assert!(z.len() * 100 >= 49 * g.numvars());
        // zp.1 free on the satisfiable left side.
        let zp1 = VarName::zp(1);
        for value in [true, false] {
            let a = PartialAssignment::new().with(zp1.clone(), value);
            assert!(solve_assuming(&g.formula, &a).unwrap().is_sat());
        }
        let g = build_thm3(&p, &b("11")).unwrap();
        let zp = g.zp_block();
        let all_false: PartialAssignment = zp.iter().map(|v| (v.clone(), false)).collect();
        assert!(verify_backbone(&g.formula, &zp, &all_false, cfg).unwrap());
    }

    #[test]
    fn membership() {
        let p = a3k(2);
        let g = build_a3k(&p, &b("011")).unwrap();
        assert!(membership_test(&g.formula, &p));
        assert_eq!(member_input(&g.formula, &p), Some(b("011")));
        assert!(!membership_test(&g.formula, &a3k(3)));
        assert!(!membership_test(&g.formula, &thm3("1")));
        assert!(!membership_test(&parse_formula("(and (var x1) (var x2))").unwrap(), &p));
        // Swapped machines.
        let swapped = ConstructionParams::a3k(lastbit1(), lastbit0(), 2).unwrap();
        assert!(!membership_test(&g.formula, &swapped));
        let t = thm3("1");
        let h = build_thm3(&t, &b("0")).unwrap();
        assert!(membership_test(&h.formula, &t));
        assert!(!membership_test(&h.formula, &thm3("1/2")));
    }

    #[test]
    fn membership_rejects_mismatched_inputs() {
        // L from x = "10", R from x = "11".
        let p = a3k(1);
        let g10 = build_a3k(&p, &b("10")).unwrap();
        let g11 = build_a3k(&p, &b("11")).unwrap();
        let (Formula::Or(s10), Formula::Or(s11)) = (&g10.formula, &g11.formula) else { panic!() };
        let mixed = Formula::Or(vec![s10[0].clone(), s11[1].clone()]);
        assert!(!membership_test(&mixed, &p));
    }

    #[test]
    fn decide_and_classify() {
        let cfg = BackboneConfig::default();
        let p = a3k(1);
        let truth = |g: &GadgetInstance| backbone_value(&g.formula, &f_backbone(g)?, cfg);
        assert!(decide_via_backbone_value(&p, &b("0"), truth).unwrap());
        assert!(!decide_via_backbone_value(&p, &b("01"), truth).unwrap());
        let mixed = |_: &GadgetInstance| {
            Ok(PartialAssignment::new()
                .with(VarName::z(1), true)
                .with(VarName::z(2), false))
        };
        assert_eq!(
            decide_via_backbone_value(&a3k(2), &b("0"), mixed),
            Err(Error::InconsistentOracle)
        );

        let g = build_thm3(&thm3("1"), &b("0")).unwrap();
        let set = |names: &[&str]| names.iter().map(|n| n.parse().unwrap()).collect();
        assert_eq!(classify_backbone_side(&g, &set(&["z.1"])).unwrap(), Side::Left);
        assert_eq!(classify_backbone_side(&g, &set(&["zp.3"])).unwrap(), Side::Right);
        assert_eq!(classify_backbone_side(&g, &set(&["z.1", "zp.1"])).unwrap(), Side::Impossible);
        let small: BTreeSet<VarName> = g.left_vars.iter().take(1).cloned().collect();
        assert_eq!(classify_backbone_side(&g, &small).unwrap(), Side::Inconclusive);
        let mut big: BTreeSet<VarName> = g.left_vars.iter().chain(&g.right_vars).cloned().collect();
        big.extend(["pad_a", "pad_b"].map(|n| VarName::free(n).unwrap()));
        assert_eq!(classify_backbone_side(&g, &big).unwrap(), Side::Impossible);
        assert!(solve(&g.formula).unwrap().is_sat());
    }
}
