//! Ramification invariants of explicit Galois covers of `k((t))` in
//! characteristic `p`, and the group-theoretic bounds on wild inertia that
//! follow from a bound on the Swan conductor.

pub mod algebra;
pub mod bound;
pub mod cover;
pub mod error;
pub mod group;
pub mod group_enum;
pub mod ramification;

pub use error::{Error, Result};
