use bblab_core::formula::Simplified;
use bblab_core::gen::{corpus, random_formula, GenConfig};
use bblab_core::sat::{solve, solve_exhaustive, Prepared, SatConfig};
use bblab_core::{parse_formula, Formula, PartialAssignment, VarName};
use proptest::prelude::*;
use rand::SeedableRng;
use std::collections::HashMap;

fn formula_from_seed(seed: u64, cfg: GenConfig) -> Formula {
    random_formula(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), cfg)
}

fn assignment(vars: &[VarName], mask: u64) -> PartialAssignment {
    vars.iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), mask >> i & 1 == 1))
        .collect()
}

proptest! {
    #[test]
    fn round_trip(seed: u64) {
        let f = formula_from_seed(seed, GenConfig::default());
        prop_assert!(f.is_well_formed());
        prop_assert_eq!(parse_formula(&f.serialize()).unwrap(), f);
    }

    #[test]
    fn substitute_removes_exactly_the_bound_vars(seed: u64, mask: u64, keep: u64) {
        let f = formula_from_seed(seed, GenConfig::default());
        let vars: Vec<VarName> = f.vars().into_iter().collect();
        let a: PartialAssignment = vars
            .iter()
            .enumerate()
            .filter(|(i, _)| keep >> i & 1 == 1)
            .map(|(i, v)| (v.clone(), mask >> i & 1 == 1))
            .collect();
        match f.substitute(&a) {
            Simplified::Formula(g) => {
                prop_assert!(g.is_well_formed());
                prop_assert!(g.vars().is_subset(&f.vars()));
                prop_assert!(g.vars().iter().all(|v| !a.contains(v)));
                // Constant propagation may drop more, but the remaining
                // formula agrees with the original on every completion.
                let rest: Vec<VarName> = f.vars().into_iter().filter(|v| !a.contains(v)).collect();
                for m in 0..1u64 << rest.len().min(8) {
                    let mut full = assignment(&rest, m);
                    for (v, b) in a.iter() {
                        full.bind(v.clone(), b);
                    }
                    prop_assert_eq!(g.evaluate(&full).unwrap(), f.evaluate(&full).unwrap());
                }
            }
            Simplified::Const(c) => {
                let rest: Vec<VarName> = f.vars().into_iter().filter(|v| !a.contains(v)).collect();
                for m in 0..1u64 << rest.len().min(8) {
                    let mut full = assignment(&rest, m);
                    for (v, b) in a.iter() {
                        full.bind(v.clone(), b);
                    }
                    prop_assert_eq!(f.evaluate(&full).unwrap(), c);
                }
            }
        }
    }
}

#[test]
fn vars_removed_when_all_occurrences_survive() {
    // No absorption possible: substitution removes exactly domain(a).
    let f = parse_formula("(and (or (var a) (var b)) (or (var c) (var d)) (var e))").unwrap();
    let a = PartialAssignment::new().with("e".parse().unwrap(), true);
    let Simplified::Formula(g) = f.substitute(&a) else { panic!() };
    let want: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
    let got: Vec<String> = g.vars().iter().map(|v| v.to_string()).collect();
    assert_eq!(got, want);
}

#[test]
fn serialization_is_injective_on_ten_thousand() {
    let cfg = GenConfig {
        max_vars: 6,
        max_depth: 4,
        max_arity: 3,
    };
    let mut seen: HashMap<String, Formula> = HashMap::new();
    for f in corpus(10, 10_000, cfg) {
        let s = f.serialize();
        assert_eq!(parse_formula(&s).unwrap(), f);
        if let Some(prev) = seen.insert(s, f.clone()) {
            assert_eq!(prev, f, "two formulas share a serialization");
        }
    }
}

#[test]
fn tseitin_projection_on_a_thousand() {
    // For every assignment to the original variables, the CNF extended by
    // those values is satisfiable exactly when the formula is true.
    for f in corpus(20, 1000, GenConfig::default()) {
        let vars: Vec<VarName> = f.vars().into_iter().collect();
        assert!(vars.len() <= 12);
        let prep = Prepared::new(&f, SatConfig::default());
        let mut session = prep.session();
        for mask in 0..1u64 << vars.len() {
            let a = assignment(&vars, mask);
            let want = f.evaluate(&a).unwrap();
            let r = session.query(&a, None).unwrap();
            assert_eq!(r.is_sat(), want, "{f} under {}", a.bits());
            if let Some(model) = r.model {
                assert_eq!(model, a);
            }
        }
    }
}

#[test]
fn solver_agrees_with_exhaustive_up_to_sixteen_vars() {
    let cfg = GenConfig {
        max_vars: 16,
        max_depth: 7,
        max_arity: 4,
    };
    for f in corpus(30, 400, cfg) {
        let r = solve(&f).unwrap();
        assert_eq!(r.is_sat(), solve_exhaustive(&f, 16).unwrap().is_sat(), "{f}");
        if let Some(model) = &r.model {
            assert!(f.evaluate(model).unwrap());
        }
        assert_eq!(solve(&f).unwrap(), r, "nondeterministic on {f}");
    }
}
