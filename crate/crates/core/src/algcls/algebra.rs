use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::context::Cat;
use crate::error::{bail, Error, Result};
use crate::karoubi::{restrict_morphism, KObject, Restriction};
use crate::linalg::{independent_subset, solve_combination, CommAlgebra};
use crate::ordcomb::{product_orbit_count, GMap, GSet, Product};
use crate::permcat::{compose, integrate, Dense, Kernel, Morphism, Pt};
use crate::scalar::Field;

/// A commutative algebra object: a summand `A = (C(X), e)` with
/// multiplication `C(X × X) → C(X)` and unit `1 → C(X)`, both factoring
/// through `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AlgebraObject<F> {
    pub carrier: KObject<F>,
    pub mult: Morphism<F>,
    pub unit: Morphism<F>,
}

impl<F: Field> AlgebraObject<F> {
    pub fn ambient(&self) -> &GSet {
        &self.carrier.ambient
    }

    pub fn s(&self) -> usize {
        self.carrier.s()
    }
}

/// The diagonal `X → X × X`.
pub fn diagonal(cat: &Cat, x: &GSet) -> Result<GMap> {
    let xx = cat.product(&[x.clone(), x.clone()])?;
    GMap::from_points(x, xx.gset(), |o, p| xx.join(&[(o, p), (o, p)]).expect("diagonal orbit exists"))
}

/// `C(X)` with pointwise multiplication: pullback along the diagonal, and
/// the constant function as unit.
pub fn schwartz_algebra<F: Field>(cat: &Cat, x: &GSet) -> Result<AlgebraObject<F>> {
    let mult = Morphism::pullback(cat, &diagonal(cat, x)?)?;
    let unit = Morphism::pullback(cat, &GMap::terminal(x))?;
    Ok(AlgebraObject { carrier: KObject::whole(cat, x)?, mult, unit })
}

/// The multiplication read pointwise as `m(z; x, y)`.
pub(crate) struct MultKernel<'a, F: Field> {
    pub pairs: alloc::rc::Rc<Product>,
    pub m: Dense<'a, F>,
}

impl<'a, F: Field> MultKernel<'a, F> {
    pub fn new(cat: &Cat, a: &'a AlgebraObject<F>) -> Result<Self> {
        let x = a.ambient();
        Ok(MultKernel { pairs: cat.product(&[x.clone(), x.clone()])?, m: a.mult.kernel(cat)? })
    }

    pub fn at(&self, z: Pt<'_>, x: Pt<'_>, y: Pt<'_>) -> F {
        match self.pairs.join(&[x, y]) {
            Some((k, p)) => self.m.at(z, (k, &p)),
            None => F::zero(),
        }
    }
}

/// Which algebra axioms hold, each checked at every orbit of the relevant
/// power of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AxiomReport {
    pub factors_through_carrier: bool,
    pub commutative: bool,
    pub associative: bool,
    pub unital: bool,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.factors_through_carrier && self.commutative && self.associative && self.unital
    }
}

fn for_each_power_orbit(cat: &Cat, x: &GSet, k: usize, mut f: impl FnMut(&[(usize, Vec<i64>)]) -> bool) -> Result<bool> {
    let factors = vec![x.clone(); k];
    let count = product_orbit_count(&factors);
    if count > cat.caps.max_product_orbits as u128 {
        bail!(Cap, "{count} orbits of the {k}-fold power exceed the cap");
    }
    let p = cat.product(&factors)?;
    for o in 0..p.len() {
        if !f(&p.representative(o)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check commutativity, associativity and the unit law pointwise.
pub fn check_axioms<F: Field>(cat: &Cat, a: &AlgebraObject<F>) -> Result<AxiomReport> {
    let x = a.ambient().clone();
    let e = &a.carrier.idem;
    let ee = e.tensor(cat, e)?;
    let factors_through_carrier = compose(cat, e, &a.mult)? == a.mult
        && compose(cat, &a.mult, &ee)? == a.mult
        && compose(cat, e, &a.unit)? == a.unit;
    let m = MultKernel::new(cat, a)?;
    let ek = e.kernel(cat)?;
    let uk = a.unit.kernel(cat)?;
    let shape = |o: usize| &x.orbits[o];
    let commutative = for_each_power_orbit(cat, &x, 3, |p| {
        let (z, u, v) = ((p[0].0, &p[0].1[..]), (p[1].0, &p[1].1[..]), (p[2].0, &p[2].1[..]));
        m.at(z, u, v) == m.at(z, v, u)
    })?;
    let associative = for_each_power_orbit(cat, &x, 4, |p| {
        let fixed: Vec<_> = p.iter().map(|(o, pt)| (shape(*o), &pt[..])).collect();
        let (zo, x1, x2, x3) = (p[0].0, p[1].0, p[2].0, p[3].0);
        let left = integrate(&x, &fixed, |w, rel| {
            let first = m.at((zo, &rel[0]), w, (x3, &rel[3]));
            if first.is_zero() {
                return first;
            }
            first.times(&m.at(w, (x1, &rel[1]), (x2, &rel[2])))
        });
        let right = integrate(&x, &fixed, |w, rel| {
            let first = m.at((zo, &rel[0]), (x1, &rel[1]), w);
            if first.is_zero() {
                return first;
            }
            first.times(&m.at(w, (x2, &rel[2]), (x3, &rel[3])))
        });
        left == right
    })?;
    let unital = for_each_power_orbit(cat, &x, 2, |p| {
        let fixed: Vec<_> = p.iter().map(|(o, pt)| (shape(*o), &pt[..])).collect();
        let (zo, xo) = (p[0].0, p[1].0);
        let v = integrate(&x, &fixed, |w, rel| {
            let u = uk.at(w, (0, &[]));
            if u.is_zero() {
                return u;
            }
            u.times(&m.at((zo, &rel[0]), w, (xo, &rel[1])))
        });
        v == ek.at((zo, &p[0].1), (xo, &p[1].1))
    })?;
    Ok(AxiomReport { factors_through_carrier, commutative, associative, unital })
}

/// The subalgebra cut out by an idempotent `e` of `b`'s ambient: `e` must
/// sit under `b`'s carrier, contain the unit and be closed under products.
pub fn subalgebra<F: Field>(cat: &Cat, b: &AlgebraObject<F>, e: &Morphism<F>) -> Result<AlgebraObject<F>> {
    if compose(cat, e, e)? != *e || compose(cat, &b.carrier.idem, e)? != *e {
        bail!(Precondition, "not an idempotent under the carrier");
    }
    if compose(cat, e, &b.unit)? != b.unit {
        bail!(Precondition, "summand does not contain the unit");
    }
    let mult = compose(cat, &b.mult, &e.tensor(cat, e)?)?;
    if compose(cat, e, &mult)? != mult {
        bail!(Precondition, "summand is not closed under multiplication");
    }
    Ok(AlgebraObject { carrier: KObject::from_idempotent(e.clone()), mult, unit: b.unit.clone() })
}

/// Whether `φ : C(X_A) → C(X_B)` is a unital algebra homomorphism `A → B`.
pub fn is_algebra_hom<F: Field>(cat: &Cat, a: &AlgebraObject<F>, b: &AlgebraObject<F>, phi: &Morphism<F>) -> Result<bool> {
    if phi.source != *a.ambient() || phi.target != *b.ambient() {
        bail!(Structure, "morphism does not run between the carriers");
    }
    if !a.carrier.is_morphism_to(cat, &b.carrier, phi)? {
        return Ok(false);
    }
    if compose(cat, phi, &a.unit)?.coeffs != b.unit.coeffs {
        return Ok(false);
    }
    let left = compose(cat, phi, &a.mult)?;
    let right = compose(cat, &b.mult, &phi.tensor(cat, phi)?)?;
    Ok(left.coeffs == right.coeffs)
}

/// The algebra `Res A` over the stabilizer of `pins` points in coordinate
/// `coord`, with its multiplication indexed by `Res X × Res X`.
pub fn restrict_algebra<F: Field>(
    cat: &Cat,
    a: &AlgebraObject<F>,
    coord: usize,
    pins: usize,
) -> Result<(AlgebraObject<F>, Restriction)> {
    let x = a.ambient();
    let r = Restriction::new(x, coord, pins)?;
    let rpt = Restriction::new(&GSet::point(x.s), coord, pins)?;
    let idem = restrict_morphism(cat, &a.carrier.idem, &r, &r)?;
    let unit = restrict_morphism(cat, &a.unit, &rpt, &r)?;
    let rr = cat.product(&[r.set.clone(), r.set.clone()])?;
    let m = MultKernel::new(cat, a)?;
    let mult = Morphism::from_fn(cat, rr.gset(), &r.set, |z, w| {
        let parts = rr.split(w.0, w.1);
        let (xo, xp) = r.unrestrict(parts[0].0, &parts[0].1);
        let (yo, yp) = r.unrestrict(parts[1].0, &parts[1].1);
        let (zo, zp) = r.unrestrict(z.0, z.1);
        m.at((zo, &zp), (xo, &xp), (yo, &yp))
    })?;
    Ok((AlgebraObject { carrier: KObject::from_idempotent(idem), mult, unit }, r))
}

/// `Γ(A) = Hom(1, A)` as a commutative algebra: a basis of invariant
/// elements and the structure constants of their products.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Gamma<F> {
    pub basis: Vec<Morphism<F>>,
    /// `structure[i][j]` holds the coordinates of `basis[i] · basis[j]`.
    pub structure: Vec<Vec<Vec<F>>>,
    pub unit: Vec<F>,
}

impl<F: Field> Gamma<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mul(&self, u: &[F], v: &[F]) -> Vec<F> {
        let n = self.dim();
        let mut out = vec![F::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let c = u[i].times(&v[j]);
                for (o, s) in out.iter_mut().zip(&self.structure[i][j]) {
                    o.add_scaled(&c, s);
                }
            }
        }
        out
    }

    /// Primitive idempotents, when `Γ(A)` is split semisimple.
    pub fn primitive_idempotents(&self) -> Result<Vec<Vec<F>>> {
        let mul = |u: &[F], v: &[F]| self.mul(u, v);
        CommAlgebra { dim: self.dim(), unit: self.unit.clone(), mul: &mul }.primitive_idempotents()
    }
}

/// Product of two invariant elements `1 → C(X)`.
pub(crate) fn invariant_product<F: Field>(
    cat: &Cat,
    a: &AlgebraObject<F>,
    u: &Morphism<F>,
    v: &Morphism<F>,
) -> Result<Morphism<F>> {
    let p = compose(cat, &a.mult, &u.tensor(cat, v)?)?;
    Morphism::from_coeffs(cat, &GSet::point(a.s()), a.ambient(), p.coeffs)
}

pub fn gamma<F: Field>(cat: &Cat, a: &AlgebraObject<F>) -> Result<Gamma<F>> {
    let x = a.ambient();
    let pt = GSet::point(x.s);
    let e = &a.carrier.idem;
    let whole = a.carrier.is_whole(cat)?;
    let mut images = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        let b = Morphism::basis(cat, &pt, x, k)?;
        images.push(if whole { b } else { compose(cat, e, &b)? });
    }
    let vecs: Vec<Vec<F>> = images.iter().map(|m| m.coeffs.clone()).collect();
    let keep = independent_subset(&vecs, x.len());
    let basis: Vec<Morphism<F>> = keep.into_iter().map(|i| images[i].clone()).collect();
    let cols: Vec<Vec<F>> = basis.iter().map(|m| m.coeffs.clone()).collect();
    let coords = |m: &Morphism<F>| -> Result<Vec<F>> {
        solve_combination(&cols, &m.coeffs).ok_or_else(|| Error::Structure("product leaves Γ(A)".into()))
    };
    let mut structure = vec![vec![Vec::new(); basis.len()]; basis.len()];
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let c = coords(&invariant_product(cat, a, &basis[i], &basis[j])?)?;
            structure[j][i] = c.clone();
            structure[i][j] = c;
        }
    }
    let unit = coords(&a.unit)?;
    Ok(Gamma { basis, structure, unit })
}

/// Whether `Γ(A)` is a field. Decided when `Γ(A)` is one-dimensional or
/// split semisimple; anything else is reported as undetermined.
pub fn gamma_is_field<F: Field>(g: &Gamma<F>) -> Result<bool> {
    match g.dim() {
        0 => return Ok(false),
        1 => return Ok(true),
        _ => {}
    }
    match g.primitive_idempotents() {
        Ok(_) => Ok(false),
        Err(Error::Split(why)) => bail!(Undetermined, "Γ(A) of dimension {} is not split: {why}", g.dim()),
        Err(e) => Err(e),
    }
}
