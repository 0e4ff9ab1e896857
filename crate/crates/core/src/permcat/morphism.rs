use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::compose::SupportEntry;
use super::kernel::{Boxtimes, Dense, Kernel, Pt, Tensor};
use crate::context::Cat;
use crate::error::{bail, Result};
use crate::ordcomb::{product_orbit_count, GMap, GSet};
use crate::scalar::Field;

/// A morphism `C(X) → C(Y)`: an invariant function on `Y × X`, stored as one
/// coefficient per orbit of `Y × X` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Morphism<F> {
    pub source: GSet,
    pub target: GSet,
    pub coeffs: Vec<F>,
}

/// `dim Hom(C(X), C(Y))`, the number of orbits of `Y × X`.
pub fn hom_dim(x: &GSet, y: &GSet) -> u128 {
    product_orbit_count(&[y.clone(), x.clone()])
}

impl<F: Field> Morphism<F> {
    pub fn zero(cat: &Cat, source: &GSet, target: &GSet) -> Result<Self> {
        let n = cat.pair(target, source)?.len();
        Ok(Morphism { source: source.clone(), target: target.clone(), coeffs: vec![F::zero(); n] })
    }

    /// Indicator of orbit `k` of `Y × X`.
    pub fn basis(cat: &Cat, source: &GSet, target: &GSet, k: usize) -> Result<Self> {
        let mut m = Self::zero(cat, source, target)?;
        if k >= m.coeffs.len() {
            bail!(Invalid, "orbit {k} out of range");
        }
        m.coeffs[k] = F::one();
        Ok(m)
    }

    pub fn from_coeffs(cat: &Cat, source: &GSet, target: &GSet, coeffs: Vec<F>) -> Result<Self> {
        let n = cat.pair(target, source)?.len();
        if coeffs.len() != n {
            bail!(Structure, "{} coefficients for a Hom space of dimension {n}", coeffs.len());
        }
        Ok(Morphism { source: source.clone(), target: target.clone(), coeffs })
    }

    /// Tabulate a function of `(y, x)` on orbit representatives.
    pub fn from_fn(cat: &Cat, source: &GSet, target: &GSet, mut f: impl FnMut(Pt<'_>, Pt<'_>) -> F) -> Result<Self> {
        let pair = cat.pair(target, source)?;
        let coeffs = (0..pair.len())
            .map(|k| {
                let rep = pair.representative(k);
                f((rep[0].0, &rep[0].1), (rep[1].0, &rep[1].1))
            })
            .collect();
        Ok(Morphism { source: source.clone(), target: target.clone(), coeffs })
    }

    pub fn from_kernel(cat: &Cat, k: &dyn Kernel<F>) -> Result<Self> {
        Self::from_fn(cat, k.source(), k.target(), |y, x| k.at(y, x))
    }

    /// The indicator of the diagonal orbits of `X × X`.
    pub fn identity(cat: &Cat, x: &GSet) -> Result<Self> {
        Self::from_fn(cat, x, x, |y, x| if y == x { F::one() } else { F::zero() })
    }

    pub fn kernel(&self, cat: &Cat) -> Result<Dense<'_, F>> {
        Ok(Dense { m: self, pair: cat.pair(&self.target, &self.source)? })
    }

    /// Value at a point of `Y × X`.
    pub fn eval(&self, cat: &Cat, y: Pt<'_>, x: Pt<'_>) -> Result<F> {
        Ok(self.kernel(cat)?.at(y, x))
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&k| !self.coeffs[k].is_zero()).collect()
    }

    pub fn support_entries(&self, cat: &Cat) -> Result<Vec<SupportEntry<F>>> {
        let pair = cat.pair(&self.target, &self.source)?;
        Ok(self
            .support()
            .into_iter()
            .map(|k| {
                let mut rep = pair.representative(k);
                let x = rep.pop().expect("two factors");
                let y = rep.pop().expect("two factors");
                SupportEntry { y, x, value: self.coeffs[k].clone() }
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(F::is_zero)
    }

    fn check_parallel(&self, o: &Self) -> Result<()> {
        if self.source != o.source || self.target != o.target {
            bail!(Structure, "morphisms have different source or target");
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_parallel(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.plus(b)).collect();
        Ok(Morphism { source: self.source.clone(), target: self.target.clone(), coeffs })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_parallel(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.minus(b)).collect();
        Ok(Morphism { source: self.source.clone(), target: self.target.clone(), coeffs })
    }

    pub fn scale(&self, c: &F) -> Self {
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            coeffs: self.coeffs.iter().map(|a| a.times(c)).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn after(&self, cat: &Cat, other: &Self) -> Result<Self> {
        super::compose::compose(cat, self, other)
    }

    /// The same function read on `X × Y`: a morphism `C(Y) → C(X)`.
    pub fn transpose(&self, cat: &Cat) -> Result<Self> {
        let k = self.kernel(cat)?;
        Self::from_fn(cat, &self.target, &self.source, |x, y| k.at(y, x))
    }

    /// `self ⊗ other : C(X × X′) → C(Y × Y′)`.
    pub fn tensor(&self, cat: &Cat, other: &Self) -> Result<Self> {
        let (a, b) = (self.kernel(cat)?, other.kernel(cat)?);
        let t = Tensor {
            a: &a,
            b: &b,
            src: cat.product(&[self.source.clone(), other.source.clone()])?,
            tgt: cat.product(&[self.target.clone(), other.target.clone()])?,
        };
        Self::from_kernel(cat, &t)
    }

    /// `self ⊠ other` over the product of the two groups.
    pub fn boxtimes(&self, cat: &Cat, other: &Self) -> Result<Self> {
        let (a, b) = (self.kernel(cat)?, other.kernel(cat)?);
        Self::from_kernel(cat, &Boxtimes::new(&a, &b))
    }

    /// Block sum `C(X ⊔ X′) → C(Y ⊔ Y′)`.
    pub fn dsum(&self, cat: &Cat, other: &Self) -> Result<Self> {
        let source = self.source.dsum(&other.source)?;
        let target = self.target.dsum(&other.target)?;
        let (a, b) = (self.kernel(cat)?, other.kernel(cat)?);
        let (ny, nx) = (self.target.len(), self.source.len());
        Self::from_fn(cat, &source, &target, |y, x| match (y.0 < ny, x.0 < nx) {
            (true, true) => a.at(y, x),
            (false, false) => b.at((y.0 - ny, y.1), (x.0 - nx, x.1)),
            _ => F::zero(),
        })
    }

    /// `tr(φ) = Σ_O μ(O) φ(o, o)` over the orbits `O` of `X`.
    pub fn trace(&self, cat: &Cat) -> Result<F> {
        if self.source != self.target {
            bail!(Precondition, "trace of a non-endomorphism");
        }
        let k = self.kernel(cat)?;
        let mut acc = F::zero();
        for (o, shape) in self.source.orbits.iter().enumerate() {
            let rep = shape.representative();
            acc.add_scaled(&F::sign(shape.degree() as i64), &k.at((o, &rep), (o, &rep)));
        }
        Ok(acc)
    }

    /// `f^* : C(X) → C(Y)` for `f : Y → X`, the indicator of the graph.
    pub fn pullback(cat: &Cat, f: &GMap) -> Result<Self> {
        Self::from_fn(cat, &f.target, &f.source, |y, x| {
            let (t, img) = f.apply(y.0, y.1);
            if t == x.0 && img == x.1 {
                F::one()
            } else {
                F::zero()
            }
        })
    }

    /// `f_* : C(Y) → C(X)` for `f : Y → X`.
    pub fn pushforward(cat: &Cat, f: &GMap) -> Result<Self> {
        Self::from_fn(cat, &f.source, &f.target, |x, y| {
            let (t, img) = f.apply(y.0, y.1);
            if t == x.0 && img == x.1 {
                F::one()
            } else {
                F::zero()
            }
        })
    }

    /// Evaluation `C(X × X) → 1`, the indicator of the diagonal.
    pub fn ev(cat: &Cat, x: &GSet) -> Result<Self> {
        let xx = cat.product(&[x.clone(), x.clone()])?;
        let pt = GSet::point(x.s);
        Self::from_fn(cat, xx.gset(), &pt, |_, w| {
            let parts = xx.split(w.0, w.1);
            if parts[0] == parts[1] {
                F::one()
            } else {
                F::zero()
            }
        })
    }

    /// Coevaluation `1 → C(X × X)`.
    pub fn coev(cat: &Cat, x: &GSet) -> Result<Self> {
        Self::ev(cat, x)?.transpose(cat)
    }

    /// The symmetry `C(X × Y) → C(Y × X)`.
    pub fn swap(cat: &Cat, x: &GSet, y: &GSet) -> Result<Self> {
        let xy = cat.product(&[x.clone(), y.clone()])?;
        let yx = cat.product(&[y.clone(), x.clone()])?;
        Self::from_fn(cat, xy.gset(), yx.gset(), |t, s| {
            let a = yx.split(t.0, t.1);
            let b = xy.split(s.0, s.1);
            if a[0] == b[1] && a[1] == b[0] {
                F::one()
            } else {
                F::zero()
            }
        })
    }
}
