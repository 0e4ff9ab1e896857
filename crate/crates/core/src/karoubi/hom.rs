//! Compressed Hom spaces `e_N ∘ Hom(C(X), C(Y)) ∘ e_M`, handled through the
//! sparse matrices of left and right composition on the orbit basis.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::object::KObject;
use crate::context::Cat;
use crate::error::{bail, Result};
use crate::linalg::Echelon;
use crate::ordcomb::GSet;
use crate::permcat::{integrate, table, Kernel, Morphism};
use crate::scalar::Field;

/// A sparse square matrix on the orbit basis of a Hom space, stored by
/// column with rows sorted.
pub(crate) struct Action<F> {
    pub cols: Vec<Vec<(u32, F)>>,
}

impl<F: Field> Action<F> {
    fn from_entries(n: usize, entries: HashMap<(u32, u32), F>) -> Self {
        let mut cols: Vec<Vec<(u32, F)>> = vec![Vec::new(); n];
        for ((r, c), v) in entries {
            if !v.is_zero() {
                cols[c as usize].push((r, v));
            }
        }
        for c in cols.iter_mut() {
            c.sort_unstable_by_key(|e| e.0);
        }
        Action { cols }
    }

    fn identity(n: usize) -> Self {
        Action { cols: (0..n).map(|i| vec![(i as u32, F::one())]).collect() }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    fn get(&self, r: usize, c: usize) -> Option<&F> {
        let col = &self.cols[c];
        col.binary_search_by_key(&(r as u32), |e| e.0).ok().map(|i| &col[i].1)
    }

    /// `self · v` for a dense vector.
    pub(crate) fn apply_sparse(&self, v: &[(u32, F)], out: &mut [F]) {
        for (m, c) in v {
            for (r, x) in &self.cols[*m as usize] {
                out[*r as usize].add_scaled(c, x);
            }
        }
    }
}

/// `h ↦ e ∘ h` on `Hom(C(P), C(W))` for `e` an endomorphism of `C(W)`.
pub(crate) fn left_action<F: Field>(cat: &Cat, e: &Morphism<F>, p: &GSet) -> Result<Action<F>> {
    let w = &e.target;
    let n = cat.pair(w, p)?.len();
    if e.is_zero() {
        return Ok(Action { cols: vec![Vec::new(); n] });
    }
    if e == &Morphism::identity(cat, w)? {
        return Ok(Action::identity(n));
    }
    let t = table(cat, w, w, p)?;
    let mut acc: HashMap<(u32, u32), F> = HashMap::new();
    for (i, c) in e.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.negate();
        for &(k, j, sign) in t.row(i) {
            acc.entry((k, j)).or_insert_with(F::zero).add_to(if sign { &neg } else { c });
        }
    }
    Ok(Action::from_entries(n, acc))
}

/// `h ↦ h ∘ e` on `Hom(C(P), C(W))` for `e` an endomorphism of `C(P)`.
pub(crate) fn right_action<F: Field>(cat: &Cat, w: &GSet, e: &Morphism<F>) -> Result<Action<F>> {
    let p = &e.source;
    let n = cat.pair(w, p)?.len();
    if e == &Morphism::identity(cat, p)? {
        return Ok(Action::identity(n));
    }
    let t = table(cat, w, p, p)?;
    let mut acc: HashMap<(u32, u32), F> = HashMap::new();
    for i in 0..n {
        for &(k, j, sign) in t.row(i) {
            let c = &e.coeffs[j as usize];
            if c.is_zero() {
                continue;
            }
            let slot = acc.entry((k, i as u32)).or_insert_with(F::zero);
            if sign {
                *slot = slot.minus(c);
            } else {
                slot.add_to(c);
            }
        }
    }
    Ok(Action::from_entries(n, acc))
}

/// `tr(L·R)`.
pub(crate) fn trace_product<F: Field>(l: &Action<F>, r: &Action<F>) -> F {
    let mut acc = F::zero();
    for (k, col) in r.cols.iter().enumerate() {
        for (m, v) in col {
            if let Some(x) = l.get(k, *m as usize) {
                acc.add_scaled(x, v);
            }
        }
    }
    acc
}

/// Columns of `L·R` spanning its image, as coefficient vectors.
pub(crate) fn image_basis<F: Field>(l: &Action<F>, r: &Action<F>, want: usize) -> Vec<Vec<F>> {
    let n = r.len();
    let mut ech = Echelon::new(n);
    let mut out = Vec::new();
    for k in 0..n {
        if out.len() == want {
            break;
        }
        let mut v = vec![F::zero(); n];
        l.apply_sparse(&r.cols[k], &mut v);
        if ech.insert(&v) {
            out.push(v);
        }
    }
    out
}

/// Read a trace that must be a small natural number.
pub(crate) fn as_count<F: Field>(v: &F, bound: usize) -> Result<usize> {
    let mut k = F::zero();
    for i in 0..=bound {
        if &k == v {
            return Ok(i);
        }
        k = k.plus(&F::one());
    }
    bail!(Structure, "trace {v} is not a dimension in 0..={bound}")
}

/// `dim Hom(M, N)` between summands of Schwartz spaces.
pub fn khom_dim<F: Field>(cat: &Cat, m: &KObject<F>, n: &KObject<F>) -> Result<usize> {
    if m.s() != n.s() {
        bail!(Structure, "objects over {} and {} coordinates", m.s(), n.s());
    }
    let l = left_action(cat, &n.idem, &m.ambient)?;
    let r = right_action(cat, &n.ambient, &m.idem)?;
    as_count(&trace_product(&l, &r), l.len())
}

/// `dim End(M)`.
pub fn kend_dim<F: Field>(cat: &Cat, m: &KObject<F>) -> Result<usize> {
    if m.is_whole(cat)? {
        return Ok(cat.pair(&m.ambient, &m.ambient)?.len());
    }
    khom_dim(cat, m, m)
}

/// Whether two semisimple objects are isomorphic: `dim Hom(M, N)` must match
/// both endomorphism dimensions.
pub fn is_iso<F: Field>(cat: &Cat, m: &KObject<F>, n: &KObject<F>) -> Result<bool> {
    if m.s() != n.s() {
        return Ok(false);
    }
    let h = khom_dim(cat, m, n)?;
    Ok(h == kend_dim(cat, m)? && h == kend_dim(cat, n)?)
}

/// `dim Hom(1, (C(X), e))` for an idempotent given only pointwise:
/// `Σ_k ∫_{y ∈ O_k} e(x_k, y)` over the orbits `O_k` of `X`.
pub fn invariants_dim<F: Field>(x: &GSet, e: &dyn Kernel<F>) -> Result<usize> {
    let mut acc = F::zero();
    for (k, shape) in x.orbits.iter().enumerate() {
        let rep = shape.representative();
        let orbit = GSet::transitive(shape.clone());
        acc.add_to(&integrate(&orbit, &[(shape, &rep)], |y, rel| e.at((k, &rel[0]), (k, y.1))));
    }
    as_count(&acc, x.len())
}
