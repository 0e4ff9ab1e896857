//! The permutation category: objects `C(X)` for finitary sets `X`, morphisms
//! as invariant functions, composition by convolution against the measure.

pub mod compose;
mod kernel;
pub mod laws;
mod morphism;

pub use compose::{compose, compose_left_support, compose_right_support, integrate, table, SupportEntry, TripleTable};
pub use kernel::{Boxtimes, Dense, FnKernel, Kernel, Pt, Tensor};
pub use morphism::{hom_dim, Morphism};
