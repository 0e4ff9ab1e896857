//! Commutative algebra objects: Schwartz algebras and their summands,
//! invariants, trace forms and étaleness, E-idempotents, and the ideal
//! structure of restricted algebras.

mod adjunction;
mod algebra;
mod eidem;
mod etale;
mod machinery;

pub use adjunction::{adjunction_transfer, evaluation_at_pins, Transfer};
pub use algebra::{
    check_axioms, diagonal, gamma, gamma_is_field, is_algebra_hom, restrict_algebra, schwartz_algebra, subalgebra,
    AlgebraObject, AxiomReport, Gamma,
};
pub use eidem::{e_idempotents, etale_subalgebras, EIdempotent, EtaleSubalgebra};
pub use etale::{
    frobenius_check, is_etale, is_simple, relative_tensor_exactness, subetale_example, trace_form, trace_map,
    EtaleReport, ExactnessReport, Simplicity, SimplicityReport,
};
pub use machinery::{invariant_component, length_stats, restriction_ideals, LengthStats, RestrictionIdeals};
