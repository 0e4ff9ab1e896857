#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::algebra::{is_algebra_hom, restrict_algebra, schwartz_algebra, AlgebraObject};
use crate::context::Cat;
use crate::error::{bail, Result};
use crate::karoubi::{restrict_morphism, Restriction};
use crate::measure::ArmPlacement;
use crate::ordcomb::GSet;
use crate::permcat::{compose, Kernel, Morphism};
use crate::scalar::Field;

/// `g : A → C(G/U)` corresponding to `f : Res_U A → 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Transfer<F> {
    pub g: Morphism<F>,
    /// `f = ε ∘ Res g`, with `ε` evaluation at the pinned point.
    pub recovers_f: bool,
    pub algebra_hom: bool,
}

/// Evaluation at the point `(u_1 < … < u_k)` of `Res R^(k)`, the tuple of
/// pins itself.
pub fn evaluation_at_pins<F: Field>(cat: &Cat, k: usize) -> Result<Morphism<F>> {
    let r = Restriction::new(&GSet::line(k), 0, k)?;
    let base = ArmPlacement { counts: alloc::vec![0; k + 1], hits: alloc::vec![true; k] };
    let Some(o) = (0..r.set.len()).find(|&o| *r.origin(o).1 == base) else {
        bail!(Structure, "pinned orbit missing");
    };
    Morphism::from_fn(cat, &r.set, &GSet::point(1 + k), |_, x| if x.0 == o { F::one() } else { F::zero() })
}

/// The adjunction `Hom_U(Res A, 1) ≅ Hom_G(A, C(G/U))` for `U` the
/// stabilizer of `pins` points of `R`, so `G/U = R^(pins)`:
/// `g(z; x) = f(x seen from pins at z)`.
pub fn adjunction_transfer<F: Field>(cat: &Cat, a: &AlgebraObject<F>, pins: usize, f: &Morphism<F>) -> Result<Transfer<F>> {
    if a.s() != 1 {
        bail!(Precondition, "the algebra must live over one group coordinate");
    }
    if pins == 0 || pins > 2 {
        bail!(Precondition, "stabilizers of one or two points are supported");
    }
    let x = a.ambient();
    let (res, r) = restrict_algebra(cat, a, 0, pins)?;
    let unit = GSet::point(1 + pins);
    if f.source != r.set || f.target != unit {
        bail!(Structure, "f must be a morphism Res A → 1 over the stabilizer");
    }
    let one = schwartz_algebra::<F>(cat, &unit)?;
    if !is_algebra_hom(cat, &res, &one, f)? {
        bail!(Precondition, "f is not an algebra homomorphism");
    }
    let quot = GSet::line(pins);
    let fk = f.kernel(cat)?;
    let mut outside = false;
    let g = Morphism::from_fn(cat, x, &quot, |z, p| match r.locate(p.0, p.1, z.1) {
        Some((ro, rp)) => fk.at((0, &[]), (ro, &rp)),
        None => {
            outside = true;
            F::zero()
        }
    })?;
    if outside {
        bail!(Structure, "a point could not be placed around the pins");
    }
    let rq = Restriction::new(&quot, 0, pins)?;
    let back = compose(cat, &evaluation_at_pins(cat, pins)?, &restrict_morphism(cat, &g, &r, &rq)?)?;
    let recovers_f = back.coeffs == f.coeffs;
    let target = schwartz_algebra::<F>(cat, &quot)?;
    let algebra_hom = is_algebra_hom(cat, a, &target, &g)?;
    Ok(Transfer { g, recovers_f, algebra_hom })
}
