//! Finitary sets for powers of the order-automorphism group of the rationals:
//! orbit shapes, products, maps and equivariant equivalence relations.

mod gmap;
mod product;
mod relation;
mod shape;

pub use gmap::{automorphisms, projection, transitive_homs, GMap, OrbitMap};
pub use product::{product_orbit_count, Amalgam, Product};
pub(crate) use product::{for_each_orbit, project_key};
pub use relation::{
    equivalence_relations, factor_product_relation, kernel_relation, quotient, relations_from_tables,
    verify_product_relations, EquivRelation, RelationTables,
};
pub use shape::{delannoy, shuffle_words, word_count, GSet, OrbitShape};
