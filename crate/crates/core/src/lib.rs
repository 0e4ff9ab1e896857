//! Exact computations in the Delannoy category: the Karoubi envelope of the
//! permutation category of `G = Aut(Q, <)` with the measure `μ(R^(n)) = (−1)^n`.
//!
//! Layers, bottom up: [`ordcomb`] (orbits of finitary sets), [`measure`],
//! [`permcat`] (morphisms as invariant functions, convolution),
//! [`karoubi`] (idempotents, simple objects, restriction) and [`algcls`]
//! (commutative algebra objects).
#![no_std]

extern crate alloc;

pub mod algcls;
pub mod context;
pub mod error;
pub mod karoubi;
pub mod linalg;
pub mod measure;
pub mod ordcomb;
pub mod permcat;
pub mod scalar;

pub use context::{Caps, Cat};
pub use error::{Error, Result};
pub use scalar::{Field, Fp, Q};
