//! Sparse-grid sampling recovery and cubature for 1-periodic functions of
//! mixed Hölder smoothness.
//!
//! Two families of recovery operators are provided: the hierarchical Faber
//! (hat) decomposition and even-order B-spline quasi-interpolation. Both are
//! evaluated on Smolyak-type sparse grids. The crate also computes the
//! explicit error constants belonging to these operators, builds
//! lower-bound witness functions, and derives cubature rules.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod bspline;
pub mod cubature;
pub mod error;
pub mod expansion;
pub mod faber;
pub mod grids;
pub mod laurent;
pub mod math;
pub mod norms;
pub mod quasi_interp;
pub mod sampling;
pub mod tensor;
pub mod witness;

pub use error::Error;
pub use expansion::{Basis, LevelBlock, SparseExpansion};
pub use grids::{Coord, GridPoint, GridVariant, MultiIndex};
pub use laurent::LaurentPoly;
pub use quasi_interp::QIScheme;

/// Rational numbers with arbitrary precision.
pub type Rational = num_rational::BigRational;

/// Convenience result alias.
pub type Result<T> = core::result::Result<T, Error>;
