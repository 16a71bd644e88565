//! Shared inputs for the benchmarks.

use bblab_core::gadget::{parse_epsilon, ConstructionParams};
use bblab_core::machine::{lastbit0, lastbit1};

pub fn a3k(k: usize) -> ConstructionParams {
    ConstructionParams::a3k(lastbit0(), lastbit1(), k).expect("fixture pair")
}

pub fn thm3(epsilon: &str) -> ConstructionParams {
    ConstructionParams::thm3(lastbit0(), lastbit1(), parse_epsilon(epsilon).expect("epsilon"))
        .expect("fixture pair")
}
