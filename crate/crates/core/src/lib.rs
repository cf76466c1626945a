//! Chain decompositions of the Boolean lattice `2^[n]`.
//!
//! The crate builds, verifies and measures partitions of `2^[n]` into chains:
//! the classical symmetric chain decomposition, a randomized construction
//! whose chains are close to the average size `2^n / binom(n, n/2)`, and the
//! matching machinery both rely on. On top of that it provides minimal
//! Sperner graphs, a graph-container routine, forbidden-configuration
//! oracles over grids, and a battery of numerical checks for the binomial
//! estimates the construction rests on.

pub mod containers;
pub mod dump;
pub mod error;
pub mod extremal;
pub mod lattice;
pub mod matching;
pub mod method;
pub mod numerics;
pub mod pipeline;
pub mod sperner;
pub mod subset;
pub mod symmetric;

pub use error::{Error, Result};
pub use lattice::{Chain, ChainDecomposition, Ground, SizeProfile};
pub use method::Method;
pub use subset::Subset;
