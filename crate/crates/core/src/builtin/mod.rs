//! Built-in spaces and extension rules: the chain, the staircase grid with
//! its alignment recurrences, and the quadric surface over a prime field.

pub mod chain;
pub mod quadric;
pub mod staircase;

pub use chain::{chain_space, ChainRule};
pub use quadric::{
    quadric_space, MonadicFn, QuadricError, QuadricPoint, QuadricRule, QuadricSpace,
    MAX_QUADRIC_PRIME,
};
pub use staircase::{
    alignment_cost, staircase_space, AlignmentScoring, Grid, GridCost, GridCostError, NwRule,
    ScoredNwRule,
};
