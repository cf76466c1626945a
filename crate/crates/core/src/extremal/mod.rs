//! Forbidden affine configurations: evaluation in `2^[n]` and in grids,
//! exact extremal numbers for small ambients, and the reduction of
//! `ex(n, C)` to grid problems through products of chain partitions.
//!
//! A configuration is a Boolean combination of statements `f ⊂ g` and
//! `f = g` between terms built from variables with `∩` and `∪`. A family
//! contains it when some assignment of pairwise distinct members satisfies
//! the body. `⊂` is read as the (non-strict) order of the ambient; strictness
//! comes from distinctness.

mod ambient;
mod ast;
mod bounds;
mod builtins;
mod oracle;
mod partition;

pub use ambient::{Ambient, Grid, GRID_MAX_POINTS};
pub use ast::{AffineConfiguration, Body, Formula, Statement};
pub use bounds::{
    refined_boolean_bound, refined_boolean_coefficient, refined_split, theorem32_bound,
};
pub use builtins::{
    boolean_algebra, builtin_configurations, comparable_pair, corner, Catalog, Poset, POSET_MAX,
};
pub use oracle::{
    ambient_points, contains_configuration, corner_by_deletion, corner_deletion_bound, ex_oracle,
    forbidden_sets, subgrid_sampling_check, ExResult, SamplingReport, MAX_VARIABLES,
    ORACLE_MAX_POINTS,
};
pub use partition::{
    aggregate_bound, grid_partition, grid_width, sperner_value, split_long_chains,
    verify_grid_partition, AggregateBound, GridPartition, PartitionReport, PARTITION_MAX_D,
    PARTITION_MAX_N, PHI_EXHAUSTIVE_MAX_N,
};
