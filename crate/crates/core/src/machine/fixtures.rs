//! Fixture machines shipped with the crate.
//!
//! Each pair is complementary on nonempty inputs and plays the role of a
//! language and its complement in the gadget constructions.

use super::{parse_machine, MachineDescription};

pub const LASTBIT0_TM: &str = include_str!("../../fixtures/lastbit0.tm");
pub const LASTBIT1_TM: &str = include_str!("../../fixtures/lastbit1.tm");
pub const HAS0_TM: &str = include_str!("../../fixtures/has0.tm");
pub const ALL1_TM: &str = include_str!("../../fixtures/all1.tm");

/// Accepts iff the last input bit is 0.
pub fn lastbit0() -> MachineDescription {
    parse_machine(LASTBIT0_TM).expect("fixture parses")
}

/// Accepts iff the last input bit is 1.
pub fn lastbit1() -> MachineDescription {
    parse_machine(LASTBIT1_TM).expect("fixture parses")
}

/// Nondeterministic; accepts iff the input contains a 0.
pub fn has0() -> MachineDescription {
    parse_machine(HAS0_TM).expect("fixture parses")
}

/// Accepts iff the input contains no 0.
pub fn all1() -> MachineDescription {
    parse_machine(ALL1_TM).expect("fixture parses")
}

pub fn fixture_machines() -> Vec<MachineDescription> {
    vec![lastbit0(), lastbit1(), has0(), all1()]
}
