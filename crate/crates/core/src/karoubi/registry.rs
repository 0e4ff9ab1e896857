//! The simple objects `L_λ`, realized as idempotents on `C(R^(ℓ(λ)))`.
//!
//! The simples new at length `n` are the summands of `C(R^(n))` that receive
//! no map from `C(R^(n−1))`. Their idempotents span the left annihilator of
//! `Hom(C(R^(n−1)), C(R^(n)))` inside `End(C(R^(n)))`, a split commutative
//! algebra of dimension `2^n`, split by refining the eigenspaces of its
//! basis elements one after another. At length one the two summands are named by a fixed
//! convention; longer ones are named by restricting to the stabilizer of a
//! point and reading off the unique summand `L_x ⊠ L_w` with `ℓ(x) = 1`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use hashbrown::HashMap;
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::decompose::label_error;
use super::hom::{as_count, left_action, right_action, trace_product, Action};
use super::label::{LabelTuple, SimpleLabel};
use super::object::{restrict_morphism, KObject, Restriction};
use crate::context::Cat;
use crate::error::{bail, Error, Result};
use crate::linalg::{nullspace, nullspace_sparse, solve_combination, SparseRow};
use crate::ordcomb::GSet;
use crate::permcat::{compose, table, Morphism};
use crate::scalar::Field;

/// Version of the canonical orbit order. Stored idempotents are coefficient
/// vectors in this order, so caches written under another version are void.
pub const AMALGAM_ORDER_VERSION: u32 = 1;

/// Idempotents of the simple objects up to a length.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Registry<F> {
    pub depth: usize,
    pub idempotents: BTreeMap<SimpleLabel, Morphism<F>>,
}

impl<F: Field> Registry<F> {
    /// Only the unit object.
    pub fn trivial(cat: &Cat) -> Result<Self> {
        let mut idempotents = BTreeMap::new();
        idempotents.insert(SimpleLabel::empty(), Morphism::identity(cat, &GSet::point(1))?);
        Ok(Registry { depth: 0, idempotents })
    }

    pub fn build(cat: &Cat, depth: usize) -> Result<Self> {
        let mut r = Self::trivial(cat)?;
        r.extend_to(cat, depth)?;
        Ok(r)
    }

    pub fn extend_to(&mut self, cat: &Cat, depth: usize) -> Result<()> {
        while self.depth < depth {
            let n = self.depth + 1;
            let idems = new_simples(cat, n)?;
            let labels = if n == 1 { label_by_convention(&idems)? } else { label_by_restriction(cat, self, &idems, n)? };
            for (l, e) in labels.into_iter().zip(idems) {
                self.idempotents.insert(l, e);
            }
            self.depth = n;
        }
        Ok(())
    }

    pub fn labels(&self) -> impl Iterator<Item = &SimpleLabel> {
        self.idempotents.keys()
    }

    pub fn idempotent(&self, l: &SimpleLabel) -> Result<&Morphism<F>> {
        self.idempotents.get(l).ok_or_else(|| label_error(&LabelTuple::single(l.clone())))
    }

    /// `L_λ` over one coordinate.
    pub fn object(&self, l: &SimpleLabel) -> Result<KObject<F>> {
        Ok(KObject::from_idempotent(self.idempotent(l)?.clone()))
    }

    /// `L_λ1 ⊠ … ⊠ L_λs`.
    pub fn simple(&self, cat: &Cat, t: &LabelTuple) -> Result<KObject<F>> {
        let Some((first, rest)) = t.0.split_first() else {
            bail!(Invalid, "empty label tuple");
        };
        let mut e = self.idempotent(first)?.clone();
        for l in rest {
            e = e.boxtimes(cat, self.idempotent(l)?)?;
        }
        Ok(KObject::from_idempotent(e))
    }

    /// Whether the stored data was computed in the given orbit order.
    pub fn compatible(version: u32) -> bool {
        version == AMALGAM_ORDER_VERSION
    }
}

fn matrix_power_poly<F: Field>(m: &[Vec<F>]) -> Vec<F> {
    let n = m.len();
    let mul = |a: &[Vec<F>], b: &[Vec<F>]| -> Vec<Vec<F>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = F::zero();
                        for k in 0..n {
                            acc.add_scaled(&a[i][k], &b[k][j]);
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    };
    let flat = |a: &[Vec<F>]| -> Vec<F> { a.iter().flatten().cloned().collect() };
    let id: Vec<Vec<F>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect();
    let mut powers = vec![id.clone()];
    let mut flats = vec![flat(&id)];
    loop {
        let next = mul(powers.last().expect("nonempty"), m);
        let f = flat(&next);
        if let Some(c) = solve_combination(&flats, &f) {
            let mut poly: Vec<F> = c.iter().map(F::negate).collect();
            poly.push(F::one());
            return poly;
        }
        powers.push(next);
        flats.push(f);
    }
}

/// The primitive idempotents of the summand of `C(R^(n))` not reached from
/// `C(R^(n−1))`.
fn new_simples<F: Field>(cat: &Cat, n: usize) -> Result<Vec<Morphism<F>>> {
    let w = GSet::line(n);
    let p = GSet::line(n - 1);
    let end = cat.pair(&w, &w)?.len();
    let t = table(cat, &w, &w, &p)?;
    // t ∘ b_j = 0 for every basis map b_j, one equation per output orbit
    let mut eqs: HashMap<(u32, u32), SparseRow<F>> = HashMap::new();
    for i in 0..t.rows() {
        for &(k, j, neg) in t.row(i) {
            let c = if neg { F::one().negate() } else { F::one() };
            eqs.entry((j, k)).or_default().push((i, c));
        }
    }
    let mut keyed: Vec<((u32, u32), SparseRow<F>)> = eqs.into_iter().collect();
    keyed.sort_unstable_by_key(|e| e.0);
    let rows: Vec<SparseRow<F>> = keyed.into_iter().map(|e| e.1).collect();
    let basis = nullspace_sparse(&rows, end);
    let dim = 1usize << n;
    if basis.len() != dim {
        bail!(Structure, "new part of C(R^({n})) has dimension {}, expected {dim}", basis.len());
    }
    let ms: Vec<Morphism<F>> =
        basis.iter().map(|b| Morphism::from_coeffs(cat, &w, &w, b.clone())).collect::<Result<_>>()?;
    // refine eigenspaces of left composition by one basis element at a time
    let mut blocks: Vec<Vec<Vec<F>>> = vec![(0..dim)
        .map(|i| (0..dim).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()];
    for t in &ms {
        if blocks.iter().all(|b| b.len() == 1) {
            break;
        }
        let mut action = Vec::with_capacity(dim);
        for m in &ms {
            let tm = compose(cat, t, m)?;
            let Some(c) = solve_combination(&basis, &tm.coeffs) else {
                bail!(Structure, "the new part is not closed under composition");
            };
            action.push(c);
        }
        let apply = |v: &[F]| -> Vec<F> {
            let mut out = vec![F::zero(); dim];
            for (b, c) in v.iter().enumerate() {
                for (o, x) in out.iter_mut().zip(&action[b]) {
                    o.add_scaled(c, x);
                }
            }
            out
        };
        let mut next = Vec::new();
        for block in blocks {
            if block.len() == 1 {
                next.push(block);
                continue;
            }
            let k = block.len();
            // matrix of the action inside the block
            let mut cols = Vec::with_capacity(k);
            for v in &block {
                let Some(c) = solve_combination(&block, &apply(v)) else {
                    bail!(Structure, "an eigenspace is not invariant");
                };
                cols.push(c);
            }
            let mat: Vec<Vec<F>> = (0..k).map(|i| (0..k).map(|j| cols[j][i].clone()).collect()).collect();
            let poly = matrix_power_poly(&mat);
            let mut roots = F::roots(&poly).ok_or(Error::Split("root search unavailable"))?;
            if roots.len() != poly.len() - 1 {
                return Err(Error::Split("an action on the new part has a non-rational or repeated eigenvalue"));
            }
            roots.sort_by(F::canonical_cmp);
            for r in &roots {
                let shifted: Vec<Vec<F>> = (0..k)
                    .map(|i| (0..k).map(|j| if i == j { mat[i][j].minus(r) } else { mat[i][j].clone() }).collect())
                    .collect();
                let sub: Vec<Vec<F>> = nullspace(&shifted, k)
                    .into_iter()
                    .map(|c| {
                        let mut v = vec![F::zero(); dim];
                        for (x, b) in c.iter().zip(&block) {
                            for (o, y) in v.iter_mut().zip(b) {
                                o.add_scaled(x, y);
                            }
                        }
                        v
                    })
                    .collect();
                next.push(sub);
            }
        }
        blocks = next;
    }
    if blocks.len() != dim {
        return Err(Error::Split("the basis does not separate the new simples"));
    }
    let mut out = Vec::with_capacity(dim);
    for block in &blocks {
        let mut y = Morphism::zero(cat, &w, &w)?;
        for (b, m) in ms.iter().enumerate() {
            y = y.add(&m.scale(&block[0][b]))?;
        }
        let yy = compose(cat, &y, &y)?;
        let pivot = y.coeffs.iter().position(|c| !c.is_zero()).expect("nonzero eigenvector");
        let c = yy.coeffs[pivot].over(&y.coeffs[pivot]).expect("nonzero pivot");
        if c.is_zero() || yy != y.scale(&c) {
            bail!(Structure, "eigenvector of the new part is not a multiple of an idempotent");
        }
        out.push(y.scale(&c.inverse().expect("nonzero")));
    }
    Ok(out)
}

/// Length one: `a` names the idempotent whose coefficient vector, scaled to
/// have first nonzero entry one, is lexicographically smaller.
fn label_by_convention<F: Field>(idems: &[Morphism<F>]) -> Result<Vec<SimpleLabel>> {
    if idems.len() != 2 {
        bail!(Structure, "expected two new simples at length one, found {}", idems.len());
    }
    let normalized = |m: &Morphism<F>| -> Vec<F> {
        let lead = m.coeffs.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(F::one);
        m.coeffs.iter().map(|c| c.over(&lead).expect("nonzero")).collect()
    };
    let (u, v) = (normalized(&idems[0]), normalized(&idems[1]));
    let order = u.iter().zip(&v).map(|(x, y)| x.canonical_cmp(y)).find(|o| *o != Ordering::Equal);
    let a = SimpleLabel::new("a")?;
    let b = SimpleLabel::new("b")?;
    Ok(match order {
        Some(Ordering::Greater) => vec![b, a],
        Some(_) => vec![a, b],
        None => bail!(Structure, "the two new simples coincide"),
    })
}

struct Cut<F> {
    shape: GSet,
    candidates: Vec<(LabelTuple, Action<F>)>,
}

fn label_by_restriction<F: Field>(
    cat: &Cat,
    reg: &Registry<F>,
    idems: &[Morphism<F>],
    n: usize,
) -> Result<Vec<SimpleLabel>> {
    let w = GSet::line(n);
    let res = Restriction::new(&w, 0, 1)?;
    let mut cuts: Vec<Cut<F>> = Vec::new();
    for (a, b) in [(1, n - 1), (n - 1, 1)] {
        if cuts.iter().any(|c| c.shape.orbits[0].arms == [a, b]) {
            continue;
        }
        let mut candidates = Vec::new();
        for x in SimpleLabel::of_length(a) {
            for y in SimpleLabel::of_length(b) {
                let t = LabelTuple::pair(x.clone(), y);
                let s = reg.simple(cat, &t)?;
                let r = right_action(cat, &res.set, &s.idem)?;
                candidates.push((t, r));
            }
        }
        let shape = reg.simple(cat, &candidates[0].0)?.ambient;
        cuts.push(Cut { shape, candidates });
    }
    let mut labels: Vec<SimpleLabel> = Vec::with_capacity(idems.len());
    for e in idems {
        let restricted = restrict_morphism(cat, e, &res, &res)?;
        let mut found: Option<SimpleLabel> = None;
        for cut in &cuts {
            let l = left_action(cat, &restricted, &cut.shape)?;
            let mut hit = None;
            for (t, r) in &cut.candidates {
                match as_count(&trace_product(&l, r), l.len())? {
                    0 => {}
                    1 if hit.is_none() => hit = Some(t.0[0].concat(&t.0[1])),
                    m => bail!(Structure, "restriction of a new simple at length {n} contains {t} with multiplicity {m}"),
                }
            }
            let Some(h) = hit else {
                bail!(Structure, "restriction of a new simple at length {n} has no summand of the cut shape");
            };
            match &found {
                None => found = Some(h),
                Some(f) if *f == h => {}
                Some(f) => bail!(Structure, "inconsistent cuts: {f} versus {h}"),
            }
        }
        let l = found.expect("at least one cut");
        if labels.contains(&l) {
            bail!(Structure, "label {l} assigned twice at length {n}");
        }
        labels.push(l);
    }
    if labels.len() != 1 << n {
        bail!(Structure, "{} labels at length {n}", labels.len());
    }
    Ok(labels)
}
