//! Exact arithmetic: finite fields, truncated Laurent series, matrices.

pub mod field;
pub mod matrix;
pub mod series;

pub use field::{FieldElement, FiniteField};
pub use matrix::{fixed_subspace, FixedSubspace, MatrixFF};
pub use series::{hensel_lift_root, LaurentSeries, PrecisionPolicy, EXACT};
