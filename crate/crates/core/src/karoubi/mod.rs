//! The Karoubi envelope: summands of Schwartz spaces cut out by idempotents,
//! the simple objects `L_λ`, decomposition, restriction and duality.

mod decompose;
mod hom;
mod label;
mod object;
mod registry;
mod rules;

pub use decompose::{
    candidate_labels, decompose, isotypic_projector, multiplicity, splitting_maps, Decomposition, Splitting,
};
pub(crate) use hom::{image_basis, left_action, right_action};
pub use hom::{invariants_dim, is_iso, kend_dim, khom_dim};
pub use label::{LabelTuple, SimpleLabel};
pub use object::{restrict, restrict_morphism, restrict_pinned, KObject, Restriction};
pub use registry::{Registry, AMALGAM_ORDER_VERSION};
pub use rules::{
    dual_label_check, is_self_dual, pairing_dim, restriction_formula, tensor_decompose, tensor_object,
    verify_restriction_rule, DualReport, RestrictionReport,
};
