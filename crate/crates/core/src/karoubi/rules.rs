use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::decompose::{decompose, Decomposition};
use super::hom::invariants_dim;
use super::label::{LabelTuple, SimpleLabel};
use super::object::{restrict, KObject};
use super::registry::Registry;
use crate::context::Cat;
use crate::error::Result;
use crate::permcat::Tensor;
use crate::scalar::Field;

/// The summands of `Res L_λ` predicted by cutting `λ` between letters and by
/// deleting one letter.
pub fn restriction_formula(l: &SimpleLabel) -> BTreeMap<LabelTuple, usize> {
    let n = l.len();
    let mut out = BTreeMap::new();
    for i in 0..=n {
        *out.entry(LabelTuple::pair(l.slice(0, i), l.slice(i, n))).or_insert(0) += 1;
    }
    for i in 1..=n {
        *out.entry(LabelTuple::pair(l.slice(0, i - 1), l.slice(i, n))).or_insert(0) += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RestrictionReport {
    pub label: SimpleLabel,
    pub expected: BTreeMap<LabelTuple, usize>,
    pub observed: BTreeMap<LabelTuple, usize>,
    pub holds: bool,
}

/// Decompose the restriction of `L_λ` to the stabilizer of a point and
/// compare with the cut and deletion formula.
pub fn verify_restriction_rule<F: Field>(cat: &Cat, reg: &Registry<F>, l: &SimpleLabel) -> Result<RestrictionReport> {
    let res = restrict(cat, &reg.object(l)?, 0)?;
    let observed = decompose(cat, reg, &res)?.parts;
    let expected = restriction_formula(l);
    let holds = observed == expected;
    Ok(RestrictionReport { label: l.clone(), expected, observed, holds })
}

/// `L_λ ⊗ L_μ` as a summand of `C(R^(ℓλ) × R^(ℓμ))`.
pub fn tensor_object<F: Field>(cat: &Cat, reg: &Registry<F>, l: &SimpleLabel, m: &SimpleLabel) -> Result<KObject<F>> {
    reg.object(l)?.tensor(cat, &reg.object(m)?)
}

pub fn tensor_decompose<F: Field>(
    cat: &Cat,
    reg: &Registry<F>,
    l: &SimpleLabel,
    m: &SimpleLabel,
) -> Result<Decomposition> {
    decompose(cat, reg, &tensor_object(cat, reg, l, m)?)
}

/// `dim Hom(1, L_λ ⊗ L_μ)`, evaluated pointwise without forming the
/// tensor idempotent.
pub fn pairing_dim<F: Field>(cat: &Cat, reg: &Registry<F>, l: &SimpleLabel, m: &SimpleLabel) -> Result<usize> {
    let (a, b) = (reg.object(l)?, reg.object(m)?);
    let (ka, kb) = (a.idem.kernel(cat)?, b.idem.kernel(cat)?);
    let xy = cat.product(&[a.ambient.clone(), b.ambient.clone()])?;
    let t = Tensor { a: &ka, b: &kb, src: xy.clone(), tgt: xy.clone() };
    invariants_dim(xy.gset(), &t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DualReport {
    pub label: SimpleLabel,
    /// Every tested `μ` with `Hom(1, L_λ ⊗ L_μ) ≠ 0`.
    pub partners: Vec<SimpleLabel>,
    /// Whether the only partner is the letter-swapped word, once.
    pub holds: bool,
}

/// Checks `Hom(1, L_λ ⊗ L_μ) ≠ 0 ⟺ μ = λ∨` over every registered `μ` of
/// length at most `max_len`.
pub fn dual_label_check<F: Field>(cat: &Cat, reg: &Registry<F>, l: &SimpleLabel, max_len: usize) -> Result<DualReport> {
    let mut partners = Vec::new();
    let mut holds = true;
    for m in reg.labels().filter(|m| m.len() <= max_len) {
        let d = pairing_dim(cat, reg, l, m)?;
        let want = usize::from(*m == l.dual());
        if d != want {
            holds = false;
        }
        if d > 0 {
            partners.push(m.clone());
        }
    }
    if l.len() > max_len {
        holds = false;
    }
    Ok(DualReport { label: l.clone(), partners, holds })
}

/// Whether `L_λ ≅ L_λ∨` is witnessed by `Hom(1, L_λ ⊗ L_λ) ≠ 0`.
pub fn is_self_dual<F: Field>(cat: &Cat, reg: &Registry<F>, l: &SimpleLabel) -> Result<bool> {
    Ok(pairing_dim(cat, reg, l, l)? > 0)
}
