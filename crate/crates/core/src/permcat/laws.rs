//! Checks of the rigid symmetric monoidal structure on explicit morphisms.

use alloc::vec::Vec;

use super::compose::{compose, integrate};
use super::kernel::Kernel;
use super::morphism::Morphism;
use crate::context::Cat;
use crate::error::Result;
use crate::ordcomb::GSet;
use crate::scalar::Field;

/// `id ∘ f = f = f ∘ id`.
pub fn unit_law<F: Field>(cat: &Cat, f: &Morphism<F>) -> Result<bool> {
    let left = compose(cat, &Morphism::identity(cat, &f.target)?, f)?;
    let right = compose(cat, f, &Morphism::identity(cat, &f.source)?)?;
    Ok(left == *f && right == *f)
}

/// `h ∘ (g ∘ f) = (h ∘ g) ∘ f`.
pub fn associativity<F: Field>(cat: &Cat, h: &Morphism<F>, g: &Morphism<F>, f: &Morphism<F>) -> Result<bool> {
    Ok(compose(cat, h, &compose(cat, g, f)?)? == compose(cat, &compose(cat, h, g)?, f)?)
}

/// `(a ⊗ b) ∘ (c ⊗ d) = (a ∘ c) ⊗ (b ∘ d)`.
pub fn interchange<F: Field>(
    cat: &Cat,
    a: &Morphism<F>,
    b: &Morphism<F>,
    c: &Morphism<F>,
    d: &Morphism<F>,
) -> Result<bool> {
    let left = compose(cat, &a.tensor(cat, b)?, &c.tensor(cat, d)?)?;
    let right = compose(cat, a, c)?.tensor(cat, &compose(cat, b, d)?)?;
    Ok(left == right)
}

/// Both zigzag identities for `ev` and `coev` on `C(X)`, evaluated at every
/// orbit of `X × X`. The identity factors pin the outer copies of `X`, so
/// each side is an integral over the middle copy:
/// `∫_b ev(z, b) coev(b, y)` and `∫_b coev(y, b) ev(b, z)`.
pub fn snake<F: Field>(cat: &Cat, x: &GSet) -> Result<bool> {
    let ev = Morphism::<F>::ev(cat, x)?;
    let coev = Morphism::<F>::coev(cat, x)?;
    let (evk, coevk) = (ev.kernel(cat)?, coev.kernel(cat)?);
    let xx = cat.product(&[x.clone(), x.clone()])?;
    let pair = |a: (usize, &[i64]), b: (usize, &[i64])| xx.join(&[a, b]);
    let pt: (usize, &[i64]) = (0, &[]);
    let idk = Morphism::<F>::identity(cat, x)?;
    let idk = idk.kernel(cat)?;
    for o in 0..xx.len() {
        let rep = xx.representative(o);
        let (y, z) = ((rep[0].0, &rep[0].1[..]), (rep[1].0, &rep[1].1[..]));
        let fixed = [(&x.orbits[y.0], y.1), (&x.orbits[z.0], z.1)];
        let mut sides: Vec<F> = Vec::with_capacity(2);
        for left_ev in [true, false] {
            sides.push(integrate(x, &fixed, |b, rel| {
                let (yo, zo) = ((y.0, &rel[0][..]), (z.0, &rel[1][..]));
                let (e, c) = if left_ev { (pair(zo, b), pair(b, yo)) } else { (pair(b, zo), pair(yo, b)) };
                let (Some(e), Some(c)) = (e, c) else {
                    return F::zero();
                };
                evk.at(pt, (e.0, &e.1)).times(&coevk.at((c.0, &c.1), pt))
            }));
        }
        let want = idk.at(y, z);
        if sides.iter().any(|s| *s != want) {
            return Ok(false);
        }
    }
    Ok(true)
}
