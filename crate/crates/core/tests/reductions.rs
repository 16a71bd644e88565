use bblab_core::machine::{
    accepts, fixture_machines, lastbit0, lastbit1, parse_machine, MachineTag,
};
use bblab_core::reduction::{invert, reduce, Inverted};
use bblab_core::sat::solve;
use bblab_core::BitString;

fn inputs(max: usize) -> Vec<BitString> {
    BitString::all_up_to(max).collect()
}

#[test]
fn every_fixture_reduces_correctly() {
    for m in fixture_machines() {
        let mut xs = inputs(4);
        xs.insert(0, BitString::empty());
        for x in xs {
            let a = reduce(&m, &x).unwrap();
            assert_eq!(solve(&a.formula).unwrap().is_sat(), accepts(&m, &x).unwrap(), "{} {x}", m.tag());
            assert_eq!(a.formula.numvars(), a.p + 1);
            assert!(a.formula.vars().iter().all(|v| !v.is_z_series()));
            assert!(a.formula.vars().iter().all(|v| v.tag() == Some(&a.machine_tag)));
            assert_eq!(invert(&a.formula), Inverted::Pair { tag: m.tag(), input: x.clone() });
        }
    }
}

#[test]
fn outputs_for_distinct_machines_are_variable_disjoint() {
    let ms = fixture_machines();
    for (i, m) in ms.iter().enumerate() {
        for m2 in &ms[i + 1..] {
            for x in inputs(2) {
                for x2 in inputs(2) {
                    let a = reduce(m, &x).unwrap().formula.vars();
                    let b = reduce(m2, &x2).unwrap().formula.vars();
                    assert!(a.is_disjoint(&b));
                }
            }
        }
    }
}

#[test]
fn lastbit_pair_is_complementary_up_to_eight() {
    for x in inputs(8) {
        assert!(accepts(&lastbit0(), &x).unwrap() ^ accepts(&lastbit1(), &x).unwrap(), "{x}");
    }
}

#[test]
fn longer_clock_never_loses_an_accept() {
    for m in fixture_machines() {
        for x in inputs(5) {
            let mut prev = false;
            for e in 1..=3 {
                let now = accepts(&m.with_clock(e).unwrap(), &x).unwrap();
                assert!(!prev || now, "{} {x} e={e}", m.tag());
                prev = now;
            }
        }
    }
}

#[test]
fn tags_round_trip_and_ignore_order() {
    for m in fixture_machines() {
        assert_eq!(m.tag().parse().unwrap(), m);
    }
    assert_ne!(lastbit0().tag(), lastbit1().tag());
    let text = lastbit0().to_tm_text();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.reverse();
    let shuffled = parse_machine(&lines.join("\n")).unwrap();
    assert_eq!(shuffled.tag(), lastbit0().tag());
    assert!(MachineTag::from_text("not a tag").is_err());
}

#[test]
fn output_length_grows_with_input() {
    let lens: Vec<usize> = (1..=6)
        .map(|n| reduce(&lastbit0(), &BitString::all_of_len(n).next().unwrap()).unwrap().formula.serialize().len())
        .collect();
    assert!(lens.windows(2).all(|w| w[0] < w[1]), "{lens:?}");
}
