//! Shared caches for products and composition tables.

use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;

use hashbrown::HashMap;

use crate::error::Result;
use crate::ordcomb::{GSet, Product};
use crate::permcat::compose::TripleTable;

/// Size limits guarding combinatorial blowup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest product whose orbit index may be materialized.
    pub max_product_orbits: usize,
    /// Largest triple enumeration performed for one composition.
    pub max_triples: usize,
    /// Longest arm allowed when enumerating equivalence relations.
    pub max_relation_arm: usize,
    /// Largest composition table kept in the cache.
    pub max_cached_table: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_product_orbits: 4_000_000,
            max_triples: 40_000_000,
            max_relation_arm: 5,
            max_cached_table: 3_000_000,
        }
    }
}

type TableKey = (GSet, GSet, GSet);

/// Computation context. It owns lazily built product indexes and
/// composition tables; create one per thread.
#[derive(Default)]
pub struct Cat {
    pub caps: Caps,
    products: RefCell<HashMap<Vec<GSet>, Rc<Product>>>,
    tables: RefCell<HashMap<TableKey, Rc<TripleTable>>>,
}

impl Cat {
    pub fn new() -> Self {
        Cat::default()
    }

    pub fn with_caps(caps: Caps) -> Self {
        Cat { caps, ..Cat::default() }
    }

    /// Indexed orbits of the product of `factors`.
    pub fn product(&self, factors: &[GSet]) -> Result<Rc<Product>> {
        if let Some(p) = self.products.borrow().get(factors) {
            return Ok(p.clone());
        }
        let p = Rc::new(Product::new(factors, self.caps.max_product_orbits)?);
        self.products.borrow_mut().insert(factors.to_vec(), p.clone());
        Ok(p)
    }

    /// `Y × X`, the index set of morphisms `C(X) → C(Y)`.
    pub fn pair(&self, y: &GSet, x: &GSet) -> Result<Rc<Product>> {
        self.product(&[y.clone(), x.clone()])
    }

    pub(crate) fn cached_table(&self, key: &TableKey) -> Option<Rc<TripleTable>> {
        self.tables.borrow().get(key).cloned()
    }

    pub(crate) fn store_table(&self, key: TableKey, t: Rc<TripleTable>) {
        self.tables.borrow_mut().insert(key, t);
    }

    /// Drop all cached products and tables.
    pub fn clear(&self) {
        self.products.borrow_mut().clear();
        self.tables.borrow_mut().clear();
    }
}
