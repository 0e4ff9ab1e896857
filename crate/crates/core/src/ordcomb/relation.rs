use alloc::collections::VecDeque;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::gmap::{projection, GMap};
use super::product::{for_each_orbit, product_orbit_count, project_key, Product};
use super::shape::{GSet, OrbitShape};
use crate::context::Cat;
use crate::error::{bail, Result};

/// An equivariant equivalence relation, stored as the sorted list of the
/// orbits of `X × X` it contains.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EquivRelation {
    pub base: GSet,
    pub orbits: Vec<usize>,
}

/// Orbits of `X × X` and `X × X × X` with the projections between them.
pub struct RelationTables {
    pub base: GSet,
    pub pairs: Rc<Product>,
    pub diagonal: Vec<usize>,
    pub swap: Vec<usize>,
    /// `(p12, p23, p13)` for every orbit of `X × X × X`.
    pub triples: Vec<[u32; 3]>,
    by12: Vec<Vec<u32>>,
    by23: Vec<Vec<u32>>,
}

impl RelationTables {
    pub fn new(cat: &Cat, x: &GSet) -> Result<RelationTables> {
        let cap = cat.caps.max_relation_arm;
        if x.orbits.iter().any(|o| o.arms.iter().any(|&a| a > cap)) {
            bail!(Cap, "relation enumeration is limited to arms of length {cap}");
        }
        let three = [x.clone(), x.clone(), x.clone()];
        let count = product_orbit_count(&three);
        if count > cat.caps.max_triples as u128 {
            bail!(Cap, "{count} triple orbits exceed the cap {}", cat.caps.max_triples);
        }
        let pairs = cat.product(&[x.clone(), x.clone()])?;
        let n = pairs.len();
        let mut diagonal = Vec::new();
        let mut swap = vec![0usize; n];
        for o in 0..n {
            let rep = pairs.representative(o);
            let (a, pa) = (&rep[0].0, &rep[0].1);
            let (b, pb) = (&rep[1].0, &rep[1].1);
            if a == b && pa == pb {
                diagonal.push(o);
            }
            swap[o] = pairs.locate(&[(*b, pb), (*a, pa)]).expect("swapped orbit exists");
        }
        let mut triples = Vec::with_capacity(count as usize);
        let mut key = Vec::new();
        let mut missing = false;
        for_each_orbit(&three, |choice, words| {
            let mut t = [0u32; 3];
            for (slot, (i, j)) in [(0, 1), (1, 2), (0, 2)].into_iter().enumerate() {
                project_key(choice, words, i, j, &mut key);
                match pairs.lookup_key(&key) {
                    Some(v) => t[slot] = v as u32,
                    None => missing = true,
                }
            }
            triples.push(t);
        })?;
        if missing {
            bail!(Structure, "a triple orbit projects outside the pair index");
        }
        let mut by12 = vec![Vec::new(); n];
        let mut by23 = vec![Vec::new(); n];
        for (k, t) in triples.iter().enumerate() {
            by12[t[0] as usize].push(k as u32);
            by23[t[1] as usize].push(k as u32);
        }
        Ok(RelationTables { base: x.clone(), pairs, diagonal, swap, triples, by12, by23 })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Orbitwise check of reflexivity, symmetry and transitivity.
    pub fn is_equivalence(&self, member: &[bool]) -> bool {
        self.diagonal.iter().all(|&d| member[d])
            && (0..self.len()).all(|o| !member[o] || member[self.swap[o]])
            && self.triples.iter().all(|t| {
                !(member[t[0] as usize] && member[t[1] as usize]) || member[t[2] as usize]
            })
    }

    /// Smallest equivalence relation containing `seed`.
    pub fn closure(&self, seed: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        let push = |o: usize, member: &mut Vec<bool>, queue: &mut VecDeque<usize>| {
            if !member[o] {
                member[o] = true;
                queue.push_back(o);
            }
        };
        for &d in &self.diagonal {
            push(d, &mut member, &mut queue);
        }
        for &o in seed {
            push(o, &mut member, &mut queue);
        }
        while let Some(o) = queue.pop_front() {
            push(self.swap[o], &mut member, &mut queue);
            for &t in &self.by12[o] {
                let t = self.triples[t as usize];
                if member[t[1] as usize] {
                    push(t[2] as usize, &mut member, &mut queue);
                }
            }
            for &t in &self.by23[o] {
                let t = self.triples[t as usize];
                if member[t[0] as usize] {
                    push(t[2] as usize, &mut member, &mut queue);
                }
            }
        }
        member
    }

    fn to_relation(&self, member: &[bool]) -> EquivRelation {
        EquivRelation {
            base: self.base.clone(),
            orbits: (0..member.len()).filter(|&o| member[o]).collect(),
        }
    }

    pub fn members(&self, r: &EquivRelation) -> Vec<bool> {
        let mut m = vec![false; self.len()];
        for &o in &r.orbits {
            m[o] = true;
        }
        m
    }
}

/// All equivariant equivalence relations on `x`, found by closing the
/// diagonal under single-orbit extensions and checked orbitwise on `X × X × X`.
/// Sorted by size, then lexicographically.
pub fn equivalence_relations(cat: &Cat, x: &GSet) -> Result<Vec<EquivRelation>> {
    let t = RelationTables::new(cat, x)?;
    relations_from_tables(&t)
}

pub fn relations_from_tables(t: &RelationTables) -> Result<Vec<EquivRelation>> {
    let start = t.closure(&[]);
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(r) = queue.pop_front() {
        for o in 0..t.len() {
            if r[o] {
                continue;
            }
            let mut seed: Vec<usize> = (0..t.len()).filter(|&i| r[i]).collect();
            seed.push(o);
            let c = t.closure(&seed);
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    let mut out: Vec<EquivRelation> = seen.iter().map(|m| t.to_relation(m)).collect();
    for r in &out {
        if !t.is_equivalence(&t.members(r)) {
            bail!(Falsified, "closure produced a non-equivalence {:?}", r.orbits);
        }
    }
    out.sort_by(|a, b| a.orbits.len().cmp(&b.orbits.len()).then_with(|| a.orbits.cmp(&b.orbits)));
    Ok(out)
}

/// The relation "same image under `f`".
pub fn kernel_relation(cat: &Cat, f: &GMap) -> Result<EquivRelation> {
    let x = &f.source;
    let pairs = cat.product(&[x.clone(), x.clone()])?;
    let mut orbits = Vec::new();
    for o in 0..pairs.len() {
        let rep = pairs.representative(o);
        if f.apply(rep[0].0, &rep[0].1) == f.apply(rep[1].0, &rep[1].1) {
            orbits.push(o);
        }
    }
    Ok(EquivRelation { base: x.clone(), orbits })
}

/// Quotient of a transitive set by an equivalence relation: keeps the
/// coordinates on which every related pair agrees, then confirms that the
/// resulting projection has exactly `r` as its kernel.
pub fn quotient(cat: &Cat, x: &GSet, r: &EquivRelation) -> Result<(GSet, GMap)> {
    if !x.is_transitive() {
        bail!(Precondition, "quotients are taken of transitive sets");
    }
    if r.base != *x {
        bail!(Structure, "relation lives on a different set");
    }
    let shape = &x.orbits[0];
    let pairs = cat.product(&[x.clone(), x.clone()])?;
    let off = shape.offsets();
    let mut keep: Vec<Vec<usize>> = shape.arms.iter().map(|&n| (0..n).collect()).collect();
    for &o in &r.orbits {
        let Some(rep) = (o < pairs.len()).then(|| pairs.representative(o)) else {
            bail!(Invalid, "relation names orbit {o} outside X × X");
        };
        for (c, k) in keep.iter_mut().enumerate() {
            k.retain(|&j| rep[0].1[off[c] + j] == rep[1].1[off[c] + j]);
        }
    }
    let p = projection(shape, &keep)?;
    let ker = kernel_relation(cat, &p)?;
    if ker.orbits != r.orbits {
        bail!(Invalid, "relation is not an equivalence relation with a set quotient");
    }
    Ok((p.target.clone(), p))
}

/// Split a relation on a transitive `X ⊠ Y` (first `a` group coordinates
/// carry `X`) into relations on `X` and `Y`, confirming that it is their product.
pub fn factor_product_relation(cat: &Cat, r: &EquivRelation, a: usize) -> Result<(EquivRelation, EquivRelation)> {
    let base = &r.base;
    if !base.is_transitive() || a == 0 || a >= base.s {
        bail!(Precondition, "need a transitive set over at least two coordinates split at {a}");
    }
    let shape = &base.orbits[0];
    let xs = GSet::transitive(OrbitShape::new(shape.arms[..a].to_vec()));
    let ys = GSet::transitive(OrbitShape::new(shape.arms[a..].to_vec()));
    let pairs = cat.product(&[base.clone(), base.clone()])?;
    let px = cat.product(&[xs.clone(), xs.clone()])?;
    let py = cat.product(&[ys.clone(), ys.clone()])?;
    let dx = shape.arms[..a].iter().sum::<usize>();
    let split = |o: usize| -> (usize, usize) {
        let rep = pairs.representative(o);
        let (u, v) = (&rep[0].1, &rep[1].1);
        let ox = px.locate(&[(0, &u[..dx]), (0, &v[..dx])]).expect("x part");
        let oy = py.locate(&[(0, &u[dx..]), (0, &v[dx..])]).expect("y part");
        (ox, oy)
    };
    let diag_x = (0..px.len()).find(|&o| px.words(o).iter().all(|w| w.iter().all(|&m| m == 3))).expect("diagonal");
    let diag_y = (0..py.len()).find(|&o| py.words(o).iter().all(|w| w.iter().all(|&m| m == 3))).expect("diagonal");
    let parts: Vec<(usize, usize)> = r.orbits.iter().map(|&o| split(o)).collect();
    let mut rx: Vec<usize> = parts.iter().filter(|p| p.1 == diag_y).map(|p| p.0).collect();
    let mut ry: Vec<usize> = parts.iter().filter(|p| p.0 == diag_x).map(|p| p.1).collect();
    rx.sort_unstable();
    ry.sort_unstable();
    let set: HashSet<(usize, usize)> = parts.iter().copied().collect();
    let product_size = rx.len() * ry.len();
    let contained = rx.iter().all(|&u| ry.iter().all(|&v| set.contains(&(u, v))));
    if !contained || product_size != set.len() {
        bail!(Falsified, "relation {:?} is not a product of relations", r.orbits);
    }
    Ok((EquivRelation { base: xs, orbits: rx }, EquivRelation { base: ys, orbits: ry }))
}

/// Exhaustive check that every equivariant equivalence relation on the
/// transitive `X ⊠ Y` is a product. For each pair `(R_X, R_Y)` of factor
/// relations and each orbit `o` outside `R_X × R_Y`, the closure of
/// `R_X × R_Y ∪ {o}` is shown to enlarge one of the two slices. Since every
/// relation contains the product of its slices, this leaves only products.
/// Returns the number of relations.
pub fn verify_product_relations(cat: &Cat, x: &OrbitShape, y: &OrbitShape) -> Result<usize> {
    let tx = RelationTables::new(cat, &GSet::transitive(x.clone()))?;
    let ty = RelationTables::new(cat, &GSet::transitive(y.clone()))?;
    let rels_x = relations_from_tables(&tx)?;
    let rels_y = relations_from_tables(&ty)?;
    let (nx, ny) = (tx.len(), ty.len());
    let comp = |t: &RelationTables| {
        let n = t.len();
        let mut s: Vec<Vec<u32>> = vec![Vec::new(); n * n];
        for tr in &t.triples {
            let cell = &mut s[tr[0] as usize * n + tr[1] as usize];
            if !cell.contains(&tr[2]) {
                cell.push(tr[2]);
            }
        }
        s
    };
    let sx = comp(&tx);
    let sy = comp(&ty);
    let (dx, dy) = (tx.diagonal[0], ty.diagonal[0]);
    for rx in &rels_x {
        let mx = tx.members(rx);
        for ry in &rels_y {
            let my = ty.members(ry);
            // members ordered with the axes first so that slice growth shows early
            let mut base: Vec<(usize, usize)> = Vec::new();
            base.extend(rx.orbits.iter().map(|&u| (u, dy)));
            base.extend(ry.orbits.iter().filter(|&&v| v != dy).map(|&v| (dx, v)));
            for &u in &rx.orbits {
                for &v in &ry.orbits {
                    if u != dx && v != dy {
                        base.push((u, v));
                    }
                }
            }
            for o in 0..nx * ny {
                let (u, v) = (o / ny, o % ny);
                if mx[u] && my[v] {
                    continue;
                }
                let (su, sv) = (tx.swap[u], ty.swap[v]);
                if su * ny + sv < o {
                    continue;
                }
                let grows = slice_grows(&base, (u, v), &mx, &my, dx, dy, nx, ny, &sx, &sy, &tx.swap, &ty.swap);
                if !grows {
                    bail!(Falsified, "relation on {x} ⊠ {y} containing orbit ({u},{v}) is not a product");
                }
            }
        }
    }
    Ok(rels_x.len() * rels_y.len())
}

#[allow(clippy::too_many_arguments)]
fn slice_grows(
    base: &[(usize, usize)],
    start: (usize, usize),
    mx: &[bool],
    my: &[bool],
    dx: usize,
    dy: usize,
    nx: usize,
    ny: usize,
    sx: &[Vec<u32>],
    sy: &[Vec<u32>],
    swx: &[usize],
    swy: &[usize],
) -> bool {
    let mut member = vec![false; nx * ny];
    let mut list: Vec<(usize, usize)> = Vec::with_capacity(base.len() + 16);
    for &(u, v) in base {
        member[u * ny + v] = true;
        list.push((u, v));
    }
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    let add = |p: (usize, usize), member: &mut Vec<bool>, list: &mut Vec<(usize, usize)>, queue: &mut VecDeque<(usize, usize)>| -> bool {
        let k = p.0 * ny + p.1;
        if member[k] {
            return false;
        }
        member[k] = true;
        list.push(p);
        queue.push_back(p);
        (p.1 == dy && !mx[p.0]) || (p.0 == dx && !my[p.1])
    };
    if add(start, &mut member, &mut list, &mut queue) {
        return true;
    }
    while let Some(q) = queue.pop_front() {
        if add((swx[q.0], swy[q.1]), &mut member, &mut list, &mut queue) {
            return true;
        }
        let mut i = 0;
        while i < list.len() {
            let r = list[i];
            i += 1;
            for (a, b) in [(q, r), (r, q)] {
                for &u in &sx[a.0 * nx + b.0] {
                    for &v in &sy[a.1 * ny + b.1] {
                        if add((u as usize, v as usize), &mut member, &mut list, &mut queue) {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}
