use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::context::Cat;
use crate::error::{bail, Result};
use crate::measure::{arm_placements, ArmPlacement, Slot};
use crate::ordcomb::{GSet, OrbitShape};
use crate::permcat::{compose, Morphism};
use crate::scalar::Field;

/// An idempotent on a Schwartz space: the summand `(C(X), e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct KObject<F> {
    pub ambient: GSet,
    pub idem: Morphism<F>,
}

impl<F: Field> KObject<F> {
    /// Checks `e ∘ e = e`.
    pub fn new(cat: &Cat, idem: Morphism<F>) -> Result<Self> {
        if idem.source != idem.target {
            bail!(Structure, "an idempotent must be an endomorphism");
        }
        if compose(cat, &idem, &idem)? != idem {
            bail!(Invalid, "morphism is not idempotent");
        }
        Ok(KObject { ambient: idem.source.clone(), idem })
    }

    /// Trusted constructor for idempotents known by construction.
    pub fn from_idempotent(idem: Morphism<F>) -> Self {
        KObject { ambient: idem.source.clone(), idem }
    }

    /// `C(X)` itself.
    pub fn whole(cat: &Cat, x: &GSet) -> Result<Self> {
        Ok(Self::from_idempotent(Morphism::identity(cat, x)?))
    }

    /// The unit object over `s` group coordinates.
    pub fn unit(cat: &Cat, s: usize) -> Result<Self> {
        Self::whole(cat, &GSet::point(s))
    }

    pub fn s(&self) -> usize {
        self.ambient.s
    }

    pub fn is_whole(&self, cat: &Cat) -> Result<bool> {
        Ok(self.idem == Morphism::identity(cat, &self.ambient)?)
    }

    /// Categorical dimension: the trace of the idempotent.
    pub fn dim(&self, cat: &Cat) -> Result<F> {
        self.idem.trace(cat)
    }

    pub fn tensor(&self, cat: &Cat, other: &Self) -> Result<Self> {
        Ok(Self::from_idempotent(self.idem.tensor(cat, &other.idem)?))
    }

    pub fn boxtimes(&self, cat: &Cat, other: &Self) -> Result<Self> {
        Ok(Self::from_idempotent(self.idem.boxtimes(cat, &other.idem)?))
    }

    pub fn dsum(&self, cat: &Cat, other: &Self) -> Result<Self> {
        Ok(Self::from_idempotent(self.idem.dsum(cat, &other.idem)?))
    }

    /// Whether `φ : C(X_self) → C(X_target)` is a morphism of summands.
    pub fn is_morphism_to(&self, cat: &Cat, target: &Self, phi: &Morphism<F>) -> Result<bool> {
        let squeezed = compose(cat, &compose(cat, &target.idem, phi)?, &self.idem)?;
        Ok(&squeezed == phi)
    }
}

/// The set `X` regarded over the stabilizer of `pins` points in coordinate
/// `coord`: that coordinate splits into `pins + 1` interval coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub base: GSet,
    pub coord: usize,
    pub pins: usize,
    pub set: GSet,
    origin: Vec<(usize, ArmPlacement)>,
}

/// Spacing between pinned points in unrestricted coordinates.
const GAP: i64 = 1 << 20;

impl Restriction {
    pub fn new(base: &GSet, coord: usize, pins: usize) -> Result<Self> {
        if coord >= base.s {
            bail!(Invalid, "coordinate {coord} out of range for a set over {} coordinates", base.s);
        }
        let mut orbits = Vec::new();
        let mut origin = Vec::new();
        for (o, shape) in base.orbits.iter().enumerate() {
            for pl in arm_placements(shape.arms[coord], pins) {
                let mut arms = shape.arms[..coord].to_vec();
                arms.extend_from_slice(&pl.counts);
                arms.extend_from_slice(&shape.arms[coord + 1..]);
                orbits.push(OrbitShape::new(arms));
                origin.push((o, pl));
            }
        }
        let set = GSet::new(base.s + pins, orbits)?;
        Ok(Restriction { base: base.clone(), coord, pins, set, origin })
    }

    /// The orbit of the base set and the placement a restricted orbit comes from.
    pub fn origin(&self, o: usize) -> (usize, &ArmPlacement) {
        (self.origin[o].0, &self.origin[o].1)
    }

    /// The point of the base set with the given restricted coordinates; pin
    /// `t` sits at `(2t + 1)·GAP` and interval `t` is shifted by `2t·GAP`.
    pub fn unrestrict(&self, o: usize, point: &[i64]) -> (usize, Vec<i64>) {
        let (bo, pl) = self.origin(o);
        let shape = &self.set.orbits[o];
        let off = shape.offsets();
        let mut out = Vec::with_capacity(self.base.orbits[bo].degree());
        for c in 0..self.base.s {
            if c < self.coord {
                out.extend_from_slice(&point[off[c]..off[c + 1]]);
            } else if c > self.coord {
                let nc = c + self.pins;
                out.extend_from_slice(&point[off[nc]..off[nc + 1]]);
            } else {
                let mut used = alloc::vec![0usize; self.pins + 1];
                for slot in pl.slots() {
                    match slot {
                        Slot::Pin(t) => out.push((2 * t as i64 + 1) * GAP),
                        Slot::Interval(t) => {
                            let v = point[off[c + t] + used[t]];
                            used[t] += 1;
                            out.push(v + 2 * t as i64 * GAP);
                        }
                    }
                }
            }
        }
        (bo, out)
    }
}

impl Restriction {
    /// The restricted orbit and point of a base point seen from pins at
    /// the given increasing values of coordinate `coord`.
    pub fn locate(&self, o: usize, point: &[i64], pins: &[i64]) -> Option<(usize, Vec<i64>)> {
        if pins.len() != self.pins || pins.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        let shape = self.base.orbits.get(o)?;
        let off = shape.offsets();
        let mut counts = alloc::vec![0usize; self.pins + 1];
        let mut hits = alloc::vec![false; self.pins];
        let mut inner: Vec<Vec<i64>> = alloc::vec![Vec::new(); self.pins + 1];
        for &v in &point[off[self.coord]..off[self.coord + 1]] {
            let t = pins.partition_point(|&p| p < v);
            if t < self.pins && pins[t] == v {
                hits[t] = true;
            } else {
                counts[t] += 1;
                inner[t].push(v);
            }
        }
        let pl = ArmPlacement { counts, hits };
        let ro = self.origin.iter().position(|(bo, p)| *bo == o && *p == pl)?;
        let mut out = point[..off[self.coord]].to_vec();
        for seg in inner {
            out.extend(seg);
        }
        out.extend_from_slice(&point[off[self.coord + 1]..]);
        Some((ro, out))
    }
}

/// A morphism read on restricted sets.
pub fn restrict_morphism<F: Field>(
    cat: &Cat,
    f: &Morphism<F>,
    source: &Restriction,
    target: &Restriction,
) -> Result<Morphism<F>> {
    if source.base != f.source || target.base != f.target {
        bail!(Structure, "restriction data does not match the morphism");
    }
    if source.coord != target.coord || source.pins != target.pins {
        bail!(Structure, "source and target are restricted differently");
    }
    let k = f.kernel(cat)?;
    let mut bad = false;
    let out = Morphism::from_fn(cat, &source.set, &target.set, |y, x| {
        let (yo, yp) = target.unrestrict(y.0, y.1);
        let (xo, xp) = source.unrestrict(x.0, x.1);
        if xp.len() != source.base.orbits[xo].degree() {
            bad = true;
        }
        crate::permcat::Kernel::at(&k, (yo, &yp), (xo, &xp))
    })?;
    if bad {
        bail!(Structure, "unrestricted point has the wrong shape");
    }
    Ok(out)
}

/// Restriction to the stabilizer of one point in coordinate `coord`.
pub fn restrict<F: Field>(cat: &Cat, m: &KObject<F>, coord: usize) -> Result<KObject<F>> {
    restrict_pinned(cat, m, coord, 1)
}

/// Restriction to the pointwise stabilizer of `pins` points in coordinate `coord`.
pub fn restrict_pinned<F: Field>(cat: &Cat, m: &KObject<F>, coord: usize, pins: usize) -> Result<KObject<F>> {
    let r = Restriction::new(&m.ambient, coord, pins)?;
    Ok(KObject::from_idempotent(restrict_morphism(cat, &m.idem, &r, &r)?))
}
