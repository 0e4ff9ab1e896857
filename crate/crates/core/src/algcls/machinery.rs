use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::algebra::{schwartz_algebra, AlgebraObject};
use crate::context::Cat;
use crate::error::{bail, Result};
use crate::karoubi::{decompose, khom_dim, KObject, LabelTuple, Registry, Restriction, SimpleLabel};
use crate::ordcomb::{GSet, OrbitShape};
use crate::permcat::{compose, Morphism};
use crate::scalar::Field;

/// How `Res C(R^(n))` splits against the ideals generated by its summands
/// `1 ⊠ L_λ` and `L_λ ⊠ 1` with `ℓ(λ) = n`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RestrictionIdeals {
    pub n: usize,
    /// Orbits of the restricted set.
    pub orbits: Vec<OrbitShape>,
    /// Orbits carrying the ideal generated by the `1 ⊠ L_λ`.
    pub right_orbits: Vec<usize>,
    /// Orbits carrying the ideal generated by the `L_λ ⊠ 1`.
    pub left_orbits: Vec<usize>,
    /// Whether the product of the two ideals vanishes.
    pub product_zero: bool,
    /// Whether the two ideals together miss some orbit.
    pub sum_proper: bool,
    /// The orbits of `A′ / (p + q)`.
    pub quotient: GSet,
}

impl RestrictionIdeals {
    /// The first alternative: `pq = 0` with `p + q` proper.
    pub fn is_case_a(&self) -> bool {
        self.product_zero && self.sum_proper
    }
}

/// Orbits `i` of `Y` whose `C(Y_i)` contains one of `labels`. Since
/// `C(Y) = ∏ C(Y_i)` with each factor simple, the ideal generated by those
/// summands is the product of these factors.
fn carrying_orbits<F: Field>(cat: &Cat, reg: &Registry<F>, y: &GSet, labels: &[LabelTuple]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, shape) in y.orbits.iter().enumerate() {
        let orbit = KObject::whole(cat, &GSet::transitive(shape.clone()))?;
        let mut hit = false;
        for l in labels {
            if l.0.iter().zip(&shape.arms).any(|(w, &a)| w.len() > a) {
                continue;
            }
            if khom_dim(cat, &reg.simple(cat, l)?, &orbit)? > 0 {
                hit = true;
                break;
            }
        }
        if hit {
            out.push(i);
        }
    }
    Ok(out)
}

fn orbit_projector<F: Field>(cat: &Cat, y: &GSet, keep: &[usize]) -> Result<Morphism<F>> {
    Morphism::from_fn(cat, y, y, |a, b| if a == b && keep.contains(&a.0) { F::one() } else { F::zero() })
}

/// The ideals `p`, `q` of `A′ = Res C(R^(n))` and their product and sum.
pub fn restriction_ideals<F: Field>(cat: &Cat, reg: &Registry<F>, n: usize) -> Result<RestrictionIdeals> {
    if n == 0 {
        bail!(Precondition, "need n ≥ 1");
    }
    let r = Restriction::new(&GSet::line(n), 0, 1)?;
    let y = r.set.clone();
    let top = SimpleLabel::of_length(n);
    let right: Vec<LabelTuple> = top.iter().map(|l| LabelTuple::pair(SimpleLabel::empty(), l.clone())).collect();
    let left: Vec<LabelTuple> = top.iter().map(|l| LabelTuple::pair(l.clone(), SimpleLabel::empty())).collect();
    let right_orbits = carrying_orbits(cat, reg, &y, &right)?;
    let left_orbits = carrying_orbits(cat, reg, &y, &left)?;
    // the ideals are C(Y_J) for orbit sets J, and the product in C(Y) is
    // pointwise, so pq is carried by the orbits in both sets
    let pp = orbit_projector::<F>(cat, &y, &right_orbits)?;
    let pq = orbit_projector::<F>(cat, &y, &left_orbits)?;
    let product_zero = compose(cat, &pp, &pq)?.is_zero();
    let rest: Vec<OrbitShape> = (0..y.len())
        .filter(|i| !right_orbits.contains(i) && !left_orbits.contains(i))
        .map(|i| y.orbits[i].clone())
        .collect();
    let sum_proper = !rest.is_empty();
    Ok(RestrictionIdeals {
        n,
        orbits: y.orbits.clone(),
        right_orbits,
        left_orbits,
        product_zero,
        sum_proper,
        quotient: GSet::new(y.s, rest)?,
    })
}

/// Label lengths occurring in an object.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LengthStats {
    /// Per coordinate, the longest label in that slot.
    pub per_coord: Vec<usize>,
    /// The largest total length of a summand.
    pub total: usize,
    /// Summands with some label at least `total` long, with multiplicity.
    pub top: BTreeMap<LabelTuple, usize>,
    /// Length of the top part.
    pub top_length: usize,
}

pub fn length_stats<F: Field>(cat: &Cat, reg: &Registry<F>, m: &KObject<F>) -> Result<LengthStats> {
    let dec = decompose(cat, reg, m)?;
    let mut per_coord = alloc::vec![0usize; m.s()];
    let mut total = 0;
    for l in dec.parts.keys() {
        for (c, w) in l.0.iter().enumerate() {
            per_coord[c] = per_coord[c].max(w.len());
        }
        total = total.max(l.len());
    }
    let top: BTreeMap<LabelTuple, usize> =
        dec.parts.iter().filter(|(l, _)| l.0.iter().any(|w| w.len() >= total)).map(|(l, &k)| (l.clone(), k)).collect();
    let top_length = top.values().sum();
    Ok(LengthStats { per_coord, total, top, top_length })
}

/// The part of a Schwartz algebra `C(Y)` invariant under group coordinate
/// `coord`, as an algebra over the remaining coordinates. The coordinate
/// acts transitively on each arm, so every orbit contributes a copy of
/// `C` of that orbit with the arm removed.
pub fn invariant_component<F: Field>(cat: &Cat, y: &GSet, coord: usize) -> Result<AlgebraObject<F>> {
    if coord >= y.s || y.s < 2 {
        bail!(Precondition, "coordinate {coord} cannot be removed from a set over {} coordinates", y.s);
    }
    let orbits = y
        .orbits
        .iter()
        .map(|o| {
            let mut arms = o.arms.clone();
            arms.remove(coord);
            OrbitShape::new(arms)
        })
        .collect();
    schwartz_algebra(cat, &GSet::new(y.s - 1, orbits)?)
}
