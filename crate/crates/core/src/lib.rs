//! Backbone laboratory.
//!
//! Builds and checks the machinery behind hard-to-value backbones: an
//! invertible machine-to-SAT reduction ([`reduction`]), gadget formula
//! families whose backbones have a known shape ([`gadget`]), backbone
//! extraction and verification ([`backbone`]), and a harness that measures
//! how heuristic error counts transfer through the gadget mapping
//! ([`frequency`]).

pub mod backbone;
pub mod bits;
pub mod error;
pub mod formula;
pub mod frequency;
pub mod gadget;
pub mod gen;
pub mod machine;
pub mod reduction;
pub mod sat;

pub use backbone::{
    backbone_value, frozen_vars_brute, frozen_vars_sat, verify_backbone, BackboneConfig,
    FrozenReport,
};
pub use bits::BitString;
pub use error::{Error, Result};
pub use formula::{
    parse_formula, BackboneCertificate, Formula, PartialAssignment, Simplified, VarKind, VarName,
};
pub use machine::{accepts, MachineDescription, MachineTag};
pub use sat::{solve, solve_assuming, SatConfig, SatResult, SatStatus};
pub use gadget::{
    build_a3k, build_thm3, classify_backbone_side, compute_m, decide_via_backbone_value,
    f_backbone, membership_test, ConstructionParams, Family, GadgetInstance, Side,
};
pub use frequency::{
    builtin_adapter, enumerate_family, error_count_on_a, transfer_check, Answer, DensityProfile,
    HeuristicAdapter, TransferReport,
};
