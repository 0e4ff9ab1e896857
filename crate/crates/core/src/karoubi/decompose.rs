use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::hom::{as_count, image_basis, kend_dim, left_action, right_action, trace_product};
use super::label::{LabelTuple, SimpleLabel};
use super::object::KObject;
use super::registry::Registry;
use crate::context::Cat;
use crate::error::{bail, Error, Result};
use crate::linalg::solve_combination;
use crate::permcat::{compose, Morphism};
use crate::scalar::Field;

/// Multiplicities of the simple summands of an object.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Decomposition {
    pub parts: BTreeMap<LabelTuple, usize>,
    /// `dim End(M)`, which equals the sum of squared multiplicities.
    pub end_dim: usize,
}

impl Decomposition {
    pub fn multiplicity(&self, l: &LabelTuple) -> usize {
        self.parts.get(l).copied().unwrap_or(0)
    }

    /// Multiplicities keyed by single labels, for objects over one coordinate.
    pub fn simple_parts(&self) -> BTreeMap<SimpleLabel, usize> {
        self.parts.iter().filter(|(l, _)| l.s() == 1).map(|(l, &m)| (l.0[0].clone(), m)).collect()
    }
}

/// Labels that can occur in `C(X)`: per orbit, every tuple with each entry
/// no longer than the matching arm.
pub fn candidate_labels(x: &crate::ordcomb::GSet) -> Vec<LabelTuple> {
    let mut set = BTreeSet::new();
    for o in &x.orbits {
        set.extend(LabelTuple::all_within(&o.arms));
    }
    let mut v: Vec<LabelTuple> = set.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v
}

/// Multiplicity of the simple `s` in `m`: `dim Hom(S, M)`.
pub fn multiplicity<F: Field>(cat: &Cat, simple: &KObject<F>, m: &KObject<F>) -> Result<usize> {
    super::hom::khom_dim(cat, simple, m)
}

/// Decompose `m` against the registry. Every candidate label is tested and
/// the squared multiplicities must add up to `dim End(M)`.
pub fn decompose<F: Field>(cat: &Cat, reg: &Registry<F>, m: &KObject<F>) -> Result<Decomposition> {
    let end_dim = kend_dim(cat, m)?;
    let mut parts = BTreeMap::new();
    let mut missing = None;
    let mut total = 0usize;
    // group candidates by simple ambient so each left action is built once
    let mut by_shape: BTreeMap<Vec<usize>, Vec<LabelTuple>> = BTreeMap::new();
    for l in candidate_labels(&m.ambient) {
        by_shape.entry(l.0.iter().map(SimpleLabel::len).collect()).or_default().push(l);
    }
    for labels in by_shape.values() {
        let mut left = None;
        for l in labels {
            let simple = match reg.simple(cat, l) {
                Ok(s) => s,
                Err(Error::MissingLabel(x)) => {
                    missing.get_or_insert(x);
                    continue;
                }
                Err(e) => return Err(e),
            };
            if left.is_none() {
                left = Some(left_action(cat, &m.idem, &simple.ambient)?);
            }
            let la = left.as_ref().expect("set above");
            let r = right_action(cat, &m.ambient, &simple.idem)?;
            let k = as_count(&trace_product(la, &r), la.len())?;
            if k > 0 {
                parts.insert(l.clone(), k);
                total += k * k;
            }
        }
    }
    if total != end_dim {
        if let Some(x) = missing {
            return Err(Error::MissingLabel(x));
        }
        bail!(Structure, "squared multiplicities add to {total}, but dim End = {end_dim}");
    }
    Ok(Decomposition { parts, end_dim })
}

/// One copy of a simple inside an object.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Splitting<F> {
    /// `S → M`.
    pub inclusion: Morphism<F>,
    /// `M → S`.
    pub projection: Morphism<F>,
}

fn invert<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    // columns of m, solve m · x = e_j
    let cols: Vec<Vec<F>> = (0..n).map(|j| (0..n).map(|i| m[i][j].clone()).collect()).collect();
    let mut inv = alloc::vec![alloc::vec![F::zero(); n]; n];
    for j in 0..n {
        let mut e = alloc::vec![F::zero(); n];
        e[j] = F::one();
        let x = solve_combination(&cols, &e)?;
        for i in 0..n {
            inv[i][j] = x[i].clone();
        }
    }
    Some(inv)
}

/// Inclusions and projections of the copies of `simple` in `m`, with
/// `projection_a ∘ inclusion_b = δ_ab · e_S`.
pub fn splitting_maps<F: Field>(cat: &Cat, simple: &KObject<F>, m: &KObject<F>) -> Result<Vec<Splitting<F>>> {
    let (p, w) = (&simple.ambient, &m.ambient);
    let l_in = left_action(cat, &m.idem, p)?;
    let r_in = right_action(cat, w, &simple.idem)?;
    let mult = as_count(&trace_product(&l_in, &r_in), l_in.len())?;
    if mult == 0 {
        return Ok(Vec::new());
    }
    let incl = image_basis(&l_in, &r_in, mult);
    let l_out = left_action(cat, &simple.idem, w)?;
    let r_out = right_action(cat, p, &m.idem)?;
    let proj = image_basis(&l_out, &r_out, mult);
    if incl.len() != mult || proj.len() != mult {
        bail!(Structure, "image ranks differ from the multiplicity {mult}");
    }
    let incl: Vec<Morphism<F>> =
        incl.into_iter().map(|c| Morphism::from_coeffs(cat, p, w, c)).collect::<Result<_>>()?;
    let proj: Vec<Morphism<F>> =
        proj.into_iter().map(|c| Morphism::from_coeffs(cat, w, p, c)).collect::<Result<_>>()?;
    let pivot = simple
        .idem
        .coeffs
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Invalid("zero idempotent".to_string()))?;
    let mut gram = Vec::with_capacity(mult);
    for q in &proj {
        let mut row = Vec::with_capacity(mult);
        for i in &incl {
            let qi = compose(cat, q, i)?;
            let c = qi.coeffs[pivot].over(&simple.idem.coeffs[pivot]).expect("nonzero pivot");
            if qi != simple.idem.scale(&c) {
                bail!(Structure, "a composite through the simple is not a multiple of its idempotent");
            }
            row.push(c);
        }
        gram.push(row);
    }
    let Some(inv) = invert(&gram) else {
        bail!(Structure, "pairing between inclusions and projections is degenerate");
    };
    // projection_a = Σ_b inv[a][b] q_b, since Σ_b inv[a][b] gram[b][c] = δ_ac
    let mut out = Vec::with_capacity(mult);
    for (a, i) in incl.into_iter().enumerate() {
        let mut pa = Morphism::zero(cat, w, p)?;
        for (b, q) in proj.iter().enumerate() {
            pa = pa.add(&q.scale(&inv[a][b]))?;
        }
        out.push(Splitting { inclusion: i, projection: pa });
    }
    Ok(out)
}

/// The projector of `m` onto its `simple`-isotypic part.
pub fn isotypic_projector<F: Field>(cat: &Cat, simple: &KObject<F>, m: &KObject<F>) -> Result<Morphism<F>> {
    let mut acc = Morphism::zero(cat, &m.ambient, &m.ambient)?;
    for s in splitting_maps(cat, simple, m)? {
        acc = acc.add(&compose(cat, &s.inclusion, &s.projection)?)?;
    }
    Ok(acc)
}

pub(crate) fn label_error(l: &LabelTuple) -> Error {
    Error::MissingLabel(format!("{l}"))
}
