//! Intersecting k-uniform set families with covering-number constraints.
//!
//! Sets live in `[n] = {1, ..., n}` with `n <= 64` and are stored as bit masks,
//! so numeric mask order is colex order. Every count that feeds an identity
//! or inequality is computed with arbitrary-precision integers.

pub mod bounds;
pub mod constructions;
pub mod covers;
pub mod error;
pub mod exact;
pub mod family;
pub mod gen;
pub mod io;
pub mod par;
pub mod search;
pub mod structure;

pub use error::{Error, Result};
pub use family::{KSet, Set, UniformFamily};
pub use par::Exec;
