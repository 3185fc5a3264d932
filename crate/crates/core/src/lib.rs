//! Finite relational structures and the Galois connection between invariant relations
//! and permutation groups, together with a first-order toolkit and a staged model builder.
//!
//! Relations are bitsets over `A^m` indexed by the mixed-radix encoding of tuples with
//! the first coordinate most significant.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod construct;
pub mod error;
pub mod galois;
pub mod logic;
pub mod perm;
pub mod relation;
pub mod structure;

pub use error::{Error, Result};
pub use perm::{PartialMap, Perm};
pub use relation::{apply_permutation, intersect_all, BaseSet, Relation};
pub use structure::Structure;
