//! Finite, executable models of polynomial functors, W-types and M-types in
//! sets and presheaves, quotients, and bounded fibration checks on truncated
//! simplicial sets and Reedy diagrams.
//!
//! Everything is exhaustive enumeration over finite data. Searches charge a
//! shared [`Budget`] so that oversized inputs fail with an error instead of
//! running unbounded.

pub mod budget;
pub mod error;
pub mod fincat;
pub mod mtype;
pub mod poly;
pub mod pshw;
pub mod quotient;
pub mod reedy;
pub mod sset;
pub mod wtree;

pub use budget::{Budget, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use fincat::{FinCategory, FinFn, FinSet, Presheaf, PshMap};
pub use poly::{DepPolySignature, HatSignature, PolySignature};
pub use reedy::ReedyStructure;
pub use sset::SimplexCategory;
pub use wtree::{Forest, WTree};
