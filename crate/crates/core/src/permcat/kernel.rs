use alloc::boxed::Box;
use alloc::rc::Rc;

use crate::ordcomb::{GSet, Product};
use crate::scalar::Field;

use super::Morphism;

/// An orbit index together with a flat point of that orbit.
pub type Pt<'a> = (usize, &'a [i64]);

/// A morphism `C(X) → C(Y)` that can be evaluated at points of `Y × X`
/// without materializing its coefficient vector.
pub trait Kernel<F: Field> {
    fn source(&self) -> &GSet;
    fn target(&self) -> &GSet;
    /// Value at the pair `(y, x)`, target point first.
    fn at(&self, y: Pt<'_>, x: Pt<'_>) -> F;
}

/// A stored morphism read through the orbit index of `Y × X`.
pub struct Dense<'a, F: Field> {
    pub(crate) m: &'a Morphism<F>,
    pub(crate) pair: Rc<Product>,
}

impl<F: Field> Kernel<F> for Dense<'_, F> {
    fn source(&self) -> &GSet {
        &self.m.source
    }
    fn target(&self) -> &GSet {
        &self.m.target
    }
    fn at(&self, y: Pt<'_>, x: Pt<'_>) -> F {
        match self.pair.locate(&[y, x]) {
            Some(k) => self.m.coeffs[k].clone(),
            None => F::zero(),
        }
    }
}

type Eval<'a, F> = Box<dyn Fn(Pt<'_>, Pt<'_>) -> F + 'a>;

/// A kernel given by a closure.
pub struct FnKernel<'a, F: Field> {
    source: GSet,
    target: GSet,
    f: Eval<'a, F>,
}

impl<'a, F: Field> FnKernel<'a, F> {
    pub fn new(source: GSet, target: GSet, f: impl Fn(Pt<'_>, Pt<'_>) -> F + 'a) -> Self {
        FnKernel { source, target, f: Box::new(f) }
    }
}

impl<F: Field> Kernel<F> for FnKernel<'_, F> {
    fn source(&self) -> &GSet {
        &self.source
    }
    fn target(&self) -> &GSet {
        &self.target
    }
    fn at(&self, y: Pt<'_>, x: Pt<'_>) -> F {
        (self.f)(y, x)
    }
}

/// `a ⊗ b : C(X × X′) → C(Y × Y′)`, with both products indexed canonically.
pub struct Tensor<'a, F: Field> {
    pub(crate) a: &'a dyn Kernel<F>,
    pub(crate) b: &'a dyn Kernel<F>,
    pub(crate) src: Rc<Product>,
    pub(crate) tgt: Rc<Product>,
}

impl<F: Field> Kernel<F> for Tensor<'_, F> {
    fn source(&self) -> &GSet {
        self.src.gset()
    }
    fn target(&self) -> &GSet {
        self.tgt.gset()
    }
    fn at(&self, y: Pt<'_>, x: Pt<'_>) -> F {
        let ys = self.tgt.split(y.0, y.1);
        let xs = self.src.split(x.0, x.1);
        let first = self.a.at((ys[0].0, &ys[0].1), (xs[0].0, &xs[0].1));
        if first.is_zero() {
            return first;
        }
        first.times(&self.b.at((ys[1].0, &ys[1].1), (xs[1].0, &xs[1].1)))
    }
}

/// `a ⊠ b` over the product of the two groups: orbit `(i, j)` of `X ⊠ X′`
/// has index `i·|X′| + j` and its point is the concatenation of the two points.
pub struct Boxtimes<'a, F: Field> {
    pub(crate) a: &'a dyn Kernel<F>,
    pub(crate) b: &'a dyn Kernel<F>,
    pub(crate) source: GSet,
    pub(crate) target: GSet,
}

impl<'a, F: Field> Boxtimes<'a, F> {
    pub fn new(a: &'a dyn Kernel<F>, b: &'a dyn Kernel<F>) -> Self {
        Boxtimes { a, b, source: a.source().boxtimes(b.source()), target: a.target().boxtimes(b.target()) }
    }
}

pub(crate) fn split_boxtimes<'p>(left: &GSet, right: &GSet, p: Pt<'p>) -> (Pt<'p>, Pt<'p>) {
    let (i, j) = (p.0 / right.len(), p.0 % right.len());
    let d = left.orbits[i].degree();
    ((i, &p.1[..d]), (j, &p.1[d..]))
}

impl<F: Field> Kernel<F> for Boxtimes<'_, F> {
    fn source(&self) -> &GSet {
        &self.source
    }
    fn target(&self) -> &GSet {
        &self.target
    }
    fn at(&self, y: Pt<'_>, x: Pt<'_>) -> F {
        let (ya, yb) = split_boxtimes(self.a.target(), self.b.target(), y);
        let (xa, xb) = split_boxtimes(self.a.source(), self.b.source(), x);
        let first = self.a.at(ya, xa);
        if first.is_zero() {
            return first;
        }
        first.times(&self.b.at(yb, xb))
    }
}
