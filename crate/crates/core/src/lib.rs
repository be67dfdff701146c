//! Dynamic programming as inductive extension of sections over finite
//! topological spaces.
//!
//! The pieces, bottom to top:
//!
//! - [`topology`]: finite spaces built from bases, with the full open-set
//!   lattice materialized and ordered canonically.
//! - [`ring`]: value carriers (integers, rationals, tolerant reals, `F_p`).
//! - [`sheaf`]: sections of ring-valued functions, restriction, the
//!   uniqueness and gluing axioms as checkable operations, germs, morphisms.
//! - [`engine`]: the computation loop: extend the covered region along
//!   minimal open supersets using a pluggable [`engine::ExtensionRule`],
//!   producing a global section and a replayable trace.
//! - [`builtin`]: the chain, the staircase grid with alignment recurrences,
//!   and the quadric surface over a prime field.
//! - [`sampling`]: random bases/sections/covers for randomized verification.

pub mod builtin;
pub mod engine;
pub mod ring;
pub mod sampling;
pub mod sheaf;
pub mod topology;

pub use engine::{
    replay, run, verify_well_definedness, ComputationTrace, ConstantRule, EngineError,
    ExtensionRule, RuleError, SchedulingPolicy, TraceStep,
};
pub use ring::{Integers, OrderedRing, PrimeField, Rat, Rationals, Reals, Ring, RingError};
pub use sheaf::{
    check_morphism, glue, sections_equal_on_cover, Germ, MorphismCheckConfig, MorphismViolation,
    Section, SheafError, SheafMorphism,
};
pub use topology::{
    Base, BaseViolation, MinimalExtensionViolation, OpenSet, PointId, Topology, TopologyError,
};
