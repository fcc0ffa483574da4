//! Explicit Ramanujan communication networks: multi-colored Cayley graphs on
//! `PSL(2, F_N)` whose generators come from quaternion arithmetic over `Q`
//! and `Q(√5)`, with the square property between colors, plus spectral and
//! combinatorial verification and a small protocol simulator.

pub mod algebra;
pub mod cayley;
pub mod generators;
pub mod graph;
pub mod numbertheory;
pub mod protocol;
pub mod spectral;

/// Version stamped into every JSON document this crate writes.
pub const SCHEMA_VERSION: u32 = 1;
