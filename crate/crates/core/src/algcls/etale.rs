use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::algebra::{gamma, gamma_is_field, schwartz_algebra, subalgebra, AlgebraObject, MultKernel};
use crate::context::Cat;
use crate::error::{bail, Error, Result};
use crate::karoubi::{
    decompose, image_basis, isotypic_projector, left_action, right_action, LabelTuple, Registry, SimpleLabel,
};
use crate::linalg::{rank, solve_combination, Echelon};
use crate::ordcomb::GSet;
use crate::permcat::{compose, compose_right_support, integrate, FnKernel, Kernel, Morphism, SupportEntry};
use crate::scalar::Field;

/// `ε_A : A → 1`, the trace of left multiplication:
/// `ε(x) = ∫_z m(z; x, z)`.
pub fn trace_map<F: Field>(cat: &Cat, a: &AlgebraObject<F>) -> Result<Morphism<F>> {
    let x = a.ambient();
    let m = MultKernel::new(cat, a)?;
    Morphism::from_fn(cat, x, &GSet::point(x.s), |_, p| {
        integrate(x, &[(&x.orbits[p.0], p.1)], |z, rel| m.at(z, (p.0, &rel[0]), z))
    })
}

/// The pairing `A → A∨` of a bilinear form `b : C(X × X) → 1`, as the
/// endomorphism `Φ(y; x) = b(x, y)` of `C(X)`.
fn pairing_map<F: Field>(cat: &Cat, x: &GSet, b: &Morphism<F>) -> Result<Morphism<F>> {
    let xx = cat.product(&[x.clone(), x.clone()])?;
    let bk = b.kernel(cat)?;
    Morphism::from_fn(cat, x, x, |y, p| match xx.join(&[p, y]) {
        Some((k, w)) => bk.at((0, &[]), (k, &w)),
        None => F::zero(),
    })
}

/// The trace form `(x, y) ↦ ε(xy)` and its pairing map `A → A∨`.
pub fn trace_form<F: Field>(cat: &Cat, a: &AlgebraObject<F>) -> Result<(Morphism<F>, Morphism<F>)> {
    let form = compose(cat, &trace_map(cat, a)?, &a.mult)?;
    let phi = pairing_map(cat, a.ambient(), &form)?;
    Ok((form, phi))
}

/// Two-sided inverse `A∨ → A` of a pairing map, if one exists.
fn invert_pairing<F: Field>(cat: &Cat, e: &Morphism<F>, phi: &Morphism<F>) -> Result<Option<Morphism<F>>> {
    let x = &e.source;
    let et = e.transpose(cat)?;
    let r = right_action(cat, x, phi)?;
    let n = r.len();
    let cols: Vec<Vec<F>> = r
        .cols
        .iter()
        .map(|c| {
            let mut v = vec![F::zero(); n];
            for (i, f) in c {
                v[*i as usize] = f.clone();
            }
            v
        })
        .collect();
    let Some(psi) = solve_combination(&cols, &e.coeffs) else {
        return Ok(None);
    };
    let psi = Morphism::from_coeffs(cat, x, x, psi)?;
    let psi = compose(cat, &compose(cat, e, &psi)?, &et)?;
    if compose(cat, &psi, phi)? != *e || compose(cat, phi, &psi)? != et {
        return Ok(None);
    }
    Ok(Some(psi))
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EtaleReport<F> {
    pub etale: bool,
    /// `ε(1)`.
    pub unit_trace: F,
    pub form: Morphism<F>,
    /// The inverse of the pairing map when the form is nondegenerate.
    pub inverse: Option<Morphism<F>>,
    /// `dim End(A)`.
    pub end_dim: usize,
    /// Dimension of `{h ∈ End(A) : Φ ∘ h = 0}`, nonzero exactly when the
    /// form has a radical.
    pub radical_dim: usize,
    /// A nonzero `h : C(X) → A` with `Φ ∘ h = 0`, when one exists.
    pub witness: Option<Morphism<F>>,
}

/// Nondegeneracy of the trace form, with a radical witness when it fails.
pub fn is_etale<F: Field>(cat: &Cat, a: &AlgebraObject<F>) -> Result<EtaleReport<F>> {
    let x = a.ambient();
    let e = &a.carrier.idem;
    let (form, phi) = trace_form(cat, a)?;
    let unit_trace = compose(cat, &trace_map(cat, a)?, &a.unit)?.coeffs[0].clone();
    let inverse = invert_pairing(cat, e, &phi)?;
    let le = left_action(cat, e, x)?;
    let re = right_action(cat, x, e)?;
    let end = image_basis(&le, &re, usize::MAX);
    let lphi = left_action(cat, &phi, x)?;
    let images: Vec<Vec<F>> = end
        .iter()
        .map(|h| {
            let sparse: Vec<(u32, F)> =
                h.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as u32, c.clone())).collect();
            let mut out = vec![F::zero(); h.len()];
            lphi.apply_sparse(&sparse, &mut out);
            out
        })
        .collect();
    let n = le.len();
    let radical_dim = end.len() - rank(&images, n);
    let mut witness = None;
    if radical_dim > 0 {
        // a kernel vector of h ↦ Φ∘h on the End(A) basis
        let cols: Vec<Vec<F>> = (0..n).map(|r| images.iter().map(|v| v[r].clone()).collect()).collect();
        let mut ech = Echelon::new(end.len());
        for c in &cols {
            ech.insert(c);
        }
        if let Some(k) = ech.kernel().into_iter().next() {
            let mut h = vec![F::zero(); n];
            for (c, b) in k.iter().zip(&end) {
                for (hi, bi) in h.iter_mut().zip(b) {
                    hi.add_scaled(c, bi);
                }
            }
            witness = Some(Morphism::from_coeffs(cat, x, x, h)?);
        }
    }
    Ok(EtaleReport { etale: inverse.is_some(), unit_trace, form, inverse, end_dim: end.len(), radical_dim, witness })
}

/// Whether `(x, y) ↦ λ(xy)` is a perfect pairing on `A`.
pub fn frobenius_check<F: Field>(cat: &Cat, a: &AlgebraObject<F>, lambda: &Morphism<F>) -> Result<bool> {
    if lambda.source != *a.ambient() || lambda.target != GSet::point(a.s()) {
        bail!(Structure, "the functional must be a morphism A → 1");
    }
    let form = compose(cat, lambda, &a.mult)?;
    let phi = pairing_map(cat, a.ambient(), &form)?;
    Ok(invert_pairing(cat, &a.carrier.idem, &phi)?.is_some())
}

/// `L_a ⊕ 1 ⊂ C(R)`: closed under multiplication, but not étale.
pub fn subetale_example<F: Field>(cat: &Cat, reg: &Registry<F>) -> Result<AlgebraObject<F>> {
    let line = GSet::line(1);
    let b = schwartz_algebra(cat, &line)?;
    let ea = reg.idempotent(&SimpleLabel::new("a")?)?;
    let eb = reg.idempotent(&SimpleLabel::new("b")?)?;
    let trivial = Morphism::identity(cat, &line)?.sub(ea)?.sub(eb)?;
    subalgebra(cat, &b, &ea.add(&trivial)?)
}

/// Dimensions behind exactness of `0 → A → B ⇉ B ⊗_A B` at `B`, read
/// through `Hom(C(X_B), −)`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ExactnessReport {
    /// `dim Hom(C(X_B), A)` through the inclusion.
    pub image_dim: usize,
    /// `dim` of the maps into `B` equalized by the two coactions.
    pub equalizer_dim: usize,
    pub exact: bool,
}

/// Exactness of `0 → A → B → B ⊗_A B` for an algebra map `i : A → B`.
/// `B ⊗_A B` is the cokernel of `x ⊗ a ⊗ y ↦ xa ⊗ y − x ⊗ ay`; its `Hom`
/// from `C(X_B)` is a quotient of `Hom(C(X_B), C(X_B × X_B))`.
pub fn relative_tensor_exactness<F: Field>(
    cat: &Cat,
    a: &AlgebraObject<F>,
    b: &AlgebraObject<F>,
    i: &Morphism<F>,
) -> Result<ExactnessReport> {
    if !super::algebra::is_algebra_hom(cat, a, b, i)? {
        bail!(Precondition, "the inclusion is not an algebra homomorphism");
    }
    let (xa, xb) = (a.ambient(), b.ambient());
    let p = xb.clone();
    let eb = &b.carrier.idem;
    // x·i(a) and i(a)·y as morphisms out of C(X_B × X_A) and C(X_A × X_B)
    let right = compose(cat, &b.mult, &eb.tensor(cat, i)?)?;
    let left = compose(cat, &b.mult, &i.tensor(cat, eb)?)?;
    let (rk, lk, ek) = (right.kernel(cat)?, left.kernel(cat)?, eb.kernel(cat)?);
    let bb = cat.product(&[xb.clone(), xb.clone()])?;
    let bab = cat.product(&[xb.clone(), xa.clone(), xb.clone()])?;
    let ba = cat.product(&[xb.clone(), xa.clone()])?;
    let ab = cat.product(&[xa.clone(), xb.clone()])?;
    let d = FnKernel::new(bab.gset().clone(), bb.gset().clone(), |t, s| {
        let out = bb.split(t.0, t.1);
        let inp = bab.split(s.0, s.1);
        let (p0, q0) = ((out[0].0, &out[0].1[..]), (out[1].0, &out[1].1[..]));
        let (x0, a0, y0) = ((inp[0].0, &inp[0].1[..]), (inp[1].0, &inp[1].1[..]), (inp[2].0, &inp[2].1[..]));
        let mut v = F::zero();
        if let Some((k, w)) = ba.join(&[x0, a0]) {
            let f = rk.at(p0, (k, &w));
            if !f.is_zero() {
                v = f.times(&ek.at(q0, y0));
            }
        }
        if let Some((k, w)) = ab.join(&[a0, y0]) {
            let g = lk.at(q0, (k, &w));
            if !g.is_zero() {
                v = v.minus(&ek.at(p0, x0).times(&g));
            }
        }
        v
    });
    let uk = b.unit.kernel(cat)?;
    let j = FnKernel::new(xb.clone(), bb.gset().clone(), |t, x| {
        let out = bb.split(t.0, t.1);
        let (p0, q0) = ((out[0].0, &out[0].1[..]), (out[1].0, &out[1].1[..]));
        let first = ek.at(p0, x).times(&uk.at(q0, (0, &[])));
        first.minus(&uk.at(p0, (0, &[])).times(&ek.at(q0, x)))
    });
    let single = |src: &GSet, tgt: &GSet, k: usize| -> Result<Vec<SupportEntry<F>>> {
        Morphism::<F>::basis(cat, src, tgt, k)?.support_entries(cat)
    };
    // D = d ∘ Hom(P, C(X_B × X_A × X_B))
    let out_len = cat.pair(bb.gset(), &p)?.len();
    let mut dspan = Echelon::new(out_len);
    for k in 0..cat.pair(bab.gset(), &p)?.len() {
        if dspan.rank() == out_len {
            break;
        }
        let v = compose_right_support(cat, &d, &single(&p, bab.gset(), k)?, &p)?;
        dspan.insert(&v.coeffs);
    }
    // Hom(P, B) and the image of Hom(P, A)
    let hb = image_basis(&left_action(cat, eb, &p)?, &right_action(cat, xb, &Morphism::identity(cat, &p)?)?, usize::MAX);
    let mut image = Echelon::new(cat.pair(xb, &p)?.len());
    for k in 0..cat.pair(xa, &p)?.len() {
        let v = compose(cat, i, &Morphism::basis(cat, &p, xa, k)?)?;
        image.insert(&v.coeffs);
    }
    let mut reduced = Vec::with_capacity(hb.len());
    for h in &hb {
        let hm = Morphism::from_coeffs(cat, &p, xb, h.clone())?;
        let mut v = compose_right_support(cat, &j, &hm.support_entries(cat)?, &p)?.coeffs;
        dspan.reduce(&mut v);
        reduced.push(v);
    }
    let equalizer_dim = hb.len() - rank(&reduced, out_len);
    let image_dim = image.rank();
    Ok(ExactnessReport { image_dim, equalizer_dim, exact: image_dim == equalizer_dim })
}

/// Outcome of the simplicity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Simplicity {
    Simple,
    NotSimple,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SimplicityReport {
    pub verdict: Simplicity,
    /// For multiplicity-free carriers: the summands and, per summand, the
    /// summands of the ideal it generates.
    pub ideals: BTreeMap<LabelTuple, Vec<LabelTuple>>,
    pub method: &'static str,
}

/// Simplicity of a commutative algebra. A multiplicity-free carrier is
/// decided by enumerating the ideals generated by its simple summands; an
/// étale algebra is simple exactly when `Γ(A)` is a field.
pub fn is_simple<F: Field>(cat: &Cat, reg: &Registry<F>, a: &AlgebraObject<F>) -> Result<SimplicityReport> {
    let dec = decompose(cat, reg, &a.carrier)?;
    if dec.parts.values().all(|&m| m == 1) {
        let labels: Vec<LabelTuple> = dec.parts.keys().cloned().collect();
        let mut proj = Vec::with_capacity(labels.len());
        for l in &labels {
            proj.push(isotypic_projector(cat, &reg.simple(cat, l)?, &a.carrier)?);
        }
        let n = labels.len();
        let mut reach = vec![vec![false; n]; n];
        for (s, ps) in proj.iter().enumerate() {
            let prod = compose(cat, &a.mult, &a.carrier.idem.tensor(cat, ps)?)?;
            for (t, pt) in proj.iter().enumerate() {
                reach[s][t] = !compose(cat, pt, &prod)?.is_zero();
            }
        }
        let mut ideals = BTreeMap::new();
        let mut simple = true;
        for s in 0..n {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for v in 0..n {
                    if reach[u][v] && !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            simple &= seen.iter().all(|&b| b);
            ideals.insert(labels[s].clone(), (0..n).filter(|&v| seen[v]).map(|v| labels[v].clone()).collect());
        }
        let verdict = if simple { Simplicity::Simple } else { Simplicity::NotSimple };
        return Ok(SimplicityReport { verdict, ideals, method: "ideal enumeration" });
    }
    if is_etale(cat, a)?.etale {
        let verdict = match gamma_is_field(&gamma(cat, a)?) {
            Ok(true) => Simplicity::Simple,
            Ok(false) => Simplicity::NotSimple,
            Err(Error::Undetermined(_)) => Simplicity::Undetermined,
            Err(e) => return Err(e),
        };
        return Ok(SimplicityReport { verdict, ideals: BTreeMap::new(), method: "invariants of an étale algebra" });
    }
    Ok(SimplicityReport { verdict: Simplicity::Undetermined, ideals: BTreeMap::new(), method: "none applies" })
}
