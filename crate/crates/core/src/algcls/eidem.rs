use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::algebra::schwartz_algebra;
use crate::context::Cat;
use crate::error::{bail, Result};
use crate::ordcomb::{product_orbit_count, quotient, EquivRelation, GMap, GSet, RelationTables};

use crate::permcat::{compose, Morphism};
use crate::scalar::Field;

const SMALL: u128 = 200_000;

/// An idempotent `γ ∈ Γ(B ⊗ B)` of `B = C(X)` with `m(γ) = 1`, `γ` swap
/// invariant and `γ₁₂γ₂₃ = γ₁₂γ₁₃ = γ₁₃γ₂₃`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EIdempotent<F> {
    /// The orbits of `X × X` where `γ = 1`.
    pub relation: EquivRelation,
    /// `γ` as a morphism `1 → C(X × X)`.
    pub element: Morphism<F>,
}

/// Backtracking search over 0/1 orbit vectors on `X × X`. Diagonal orbits
/// are 1, swapped orbits agree, and on every orbit of `X × X × X` the three
/// projections never carry exactly two ones.
struct Search<'a> {
    t: &'a RelationTables,
    value: Vec<i8>,
    touching: Vec<Vec<u32>>,
    trail: Vec<usize>,
    found: Vec<Vec<bool>>,
}

impl Search<'_> {
    fn assign(&mut self, o: usize, v: i8, queue: &mut Vec<usize>) -> bool {
        for w in [o, self.t.swap[o]] {
            match self.value[w] {
                -1 => {
                    self.value[w] = v;
                    self.trail.push(w);
                    queue.push(w);
                }
                x if x != v => return false,
                _ => {}
            }
        }
        true
    }

    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(o) = queue.pop() {
            for k in 0..self.touching[o].len() {
                let tri = self.t.triples[self.touching[o][k] as usize];
                let vals = tri.map(|p| self.value[p as usize]);
                let ones = vals.iter().filter(|&&v| v == 1).count();
                let zeros = vals.iter().filter(|&&v| v == 0).count();
                let open = 3 - ones - zeros;
                let forced = match (open, ones, zeros) {
                    (0, 2, _) => return false,
                    (1, 2, _) => 1,
                    (1, 1, 1) => 0,
                    _ => continue,
                };
                let slot = vals.iter().position(|&v| v == -1).expect("one open slot");
                if !self.assign(tri[slot] as usize, forced, &mut queue) {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let w = self.trail.pop().expect("above mark");
            self.value[w] = -1;
        }
    }

    fn run(&mut self) {
        let Some(o) = self.value.iter().position(|&v| v == -1) else {
            self.found.push(self.value.iter().map(|&v| v == 1).collect());
            return;
        };
        for v in [0, 1] {
            let mark = self.trail.len();
            let mut queue = Vec::new();
            if self.assign(o, v, &mut queue) && self.propagate(queue) {
                self.run();
            }
            self.undo(mark);
        }
    }
}

/// All E-idempotents of the Schwartz algebra `C(X)`, sorted by the size of
/// their support and then lexicographically. Each is checked against the
/// multiplication and the symmetry of `C(X × X)` when `X⁴` is small.
pub fn e_idempotents<F: Field>(cat: &Cat, x: &GSet) -> Result<Vec<EIdempotent<F>>> {
    let t = RelationTables::new(cat, x)?;
    let n = t.len();
    let mut touching: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (k, tri) in t.triples.iter().enumerate() {
        for &p in tri {
            let list = &mut touching[p as usize];
            if list.last() != Some(&(k as u32)) {
                list.push(k as u32);
            }
        }
    }
    let mut s = Search { t: &t, value: vec![-1; n], touching, trail: Vec::new(), found: Vec::new() };
    let mut queue = Vec::new();
    for &d in &t.diagonal {
        if !s.assign(d, 1, &mut queue) {
            bail!(Structure, "diagonal orbit is its own swap partner twice");
        }
    }
    if s.propagate(queue) {
        s.run();
    }
    let mut found = s.found;
    found.sort_by(|a, b| {
        let (ca, cb) = (a.iter().filter(|&&v| v).count(), b.iter().filter(|&&v| v).count());
        let oa: Vec<usize> = (0..n).filter(|&i| a[i]).collect();
        let ob: Vec<usize> = (0..n).filter(|&i| b[i]).collect();
        ca.cmp(&cb).then_with(|| oa.cmp(&ob))
    });
    // re-check every constraint independently of the search
    for member in &found {
        let ok = t.diagonal.iter().all(|&d| member[d])
            && (0..n).all(|o| member[o] == member[t.swap[o]])
            && t.triples.iter().all(|tri| tri.iter().filter(|&&p| member[p as usize]).count() != 2);
        if !ok {
            bail!(Falsified, "search produced a vector violating its constraints");
        }
    }
    let xx = t.pairs.gset().clone();
    let pt = GSet::point(x.s);
    // the symmetry check indexes X⁴, so only for small X
    let small = product_orbit_count(&vec![x.clone(); 4]) <= SMALL;
    let algebraic = if small {
        Some((schwartz_algebra::<F>(cat, x)?, Morphism::<F>::swap(cat, x, x)?))
    } else {
        None
    };
    let mut out = Vec::with_capacity(found.len());
    for member in found {
        let coeffs = member.iter().map(|&v| if v { F::one() } else { F::zero() }).collect();
        let element = Morphism::from_coeffs(cat, &pt, &xx, coeffs)?;
        if let Some((b, swap)) = &algebraic {
            if compose(cat, &b.mult, &element)? != b.unit || compose(cat, swap, &element)? != element {
                bail!(Falsified, "an E-idempotent violates the unit or symmetry condition");
            }
        }
        let relation = EquivRelation { base: x.clone(), orbits: (0..n).filter(|&i| member[i]).collect() };
        out.push(EIdempotent { relation, element });
    }
    Ok(out)
}

/// An étale subalgebra `C(Y) ↪ C(X)` given by a quotient map `X → Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EtaleSubalgebra<F> {
    pub relation: EquivRelation,
    pub quotient: GSet,
    pub map: GMap,
    /// Pullback along the quotient map.
    pub embedding: Morphism<F>,
}

/// The étale subalgebras of `C(X)` for transitive `X`, one per E-idempotent.
pub fn etale_subalgebras<F: Field>(cat: &Cat, x: &GSet) -> Result<Vec<EtaleSubalgebra<F>>> {
    let mut out = Vec::new();
    for e in e_idempotents::<F>(cat, x)? {
        let (y, q) = quotient(cat, x, &e.relation)?;
        let embedding = Morphism::pullback(cat, &q)?;
        out.push(EtaleSubalgebra { relation: e.relation, quotient: y, map: q, embedding });
    }
    Ok(out)
}
