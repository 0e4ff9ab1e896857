use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::shape::{GSet, OrbitShape};
use crate::error::{bail, Result};

/// Image of one source orbit: the target orbit and, per group coordinate,
/// the strictly increasing positions of the source arm that survive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct OrbitMap {
    pub target: usize,
    pub injections: Vec<Vec<usize>>,
}

/// An equivariant map between sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GMap {
    pub source: GSet,
    pub target: GSet,
    pub orbits: Vec<OrbitMap>,
}

impl GMap {
    pub fn new(source: GSet, target: GSet, orbits: Vec<OrbitMap>) -> Result<GMap> {
        if source.s != target.s {
            bail!(Structure, "map between sets over {} and {} coordinates", source.s, target.s);
        }
        if orbits.len() != source.len() {
            bail!(Structure, "map lists {} orbit images for {} orbits", orbits.len(), source.len());
        }
        for (o, m) in orbits.iter().enumerate() {
            let Some(t) = target.orbits.get(m.target) else {
                bail!(Invalid, "orbit {o} maps to a missing target orbit {}", m.target);
            };
            let src = &source.orbits[o];
            if m.injections.len() != source.s {
                bail!(Invalid, "orbit {o} has the wrong number of injections");
            }
            for c in 0..source.s {
                let inj = &m.injections[c];
                if inj.len() != t.arms[c]
                    || inj.windows(2).any(|w| w[0] >= w[1])
                    || inj.last().is_some_and(|&l| l >= src.arms[c])
                {
                    bail!(Invalid, "orbit {o}, coordinate {c}: not an increasing injection");
                }
            }
        }
        Ok(GMap { source, target, orbits })
    }

    pub fn identity(x: &GSet) -> GMap {
        let orbits = x
            .orbits
            .iter()
            .enumerate()
            .map(|(i, o)| OrbitMap { target: i, injections: o.arms.iter().map(|&n| (0..n).collect()).collect() })
            .collect();
        GMap { source: x.clone(), target: x.clone(), orbits }
    }

    /// The map to the point.
    pub fn terminal(x: &GSet) -> GMap {
        let orbits = x
            .orbits
            .iter()
            .map(|_| OrbitMap { target: 0, injections: alloc::vec![Vec::new(); x.s] })
            .collect();
        GMap { source: x.clone(), target: GSet::point(x.s), orbits }
    }

    /// Build a map from its action on canonical representatives. The closure
    /// receives a source orbit and a point of it and returns the target orbit
    /// with the image point; the image coordinates must be drawn from the
    /// source point.
    pub fn from_points(
        source: &GSet,
        target: &GSet,
        f: impl Fn(usize, &[i64]) -> (usize, Vec<i64>),
    ) -> Result<GMap> {
        let mut orbits = Vec::with_capacity(source.len());
        for (o, shape) in source.orbits.iter().enumerate() {
            let rep = shape.representative();
            let (t, img) = f(o, &rep);
            let Some(tshape) = target.orbits.get(t) else {
                bail!(Invalid, "image orbit {t} is missing");
            };
            if img.len() != tshape.degree() {
                bail!(Invalid, "image point has the wrong length");
            }
            let soff = shape.offsets();
            let toff = tshape.offsets();
            let mut injections = Vec::with_capacity(source.s);
            for c in 0..source.s {
                let seg = &rep[soff[c]..soff[c + 1]];
                let mut inj = Vec::new();
                for v in &img[toff[c]..toff[c + 1]] {
                    match seg.iter().position(|x| x == v) {
                        Some(p) => inj.push(p),
                        None => bail!(Invalid, "image value {v} is not a source coordinate"),
                    }
                }
                injections.push(inj);
            }
            orbits.push(OrbitMap { target: t, injections });
        }
        GMap::new(source.clone(), target.clone(), orbits)
    }

    /// Image of a point of source orbit `o`.
    pub fn apply(&self, o: usize, point: &[i64]) -> (usize, Vec<i64>) {
        let m = &self.orbits[o];
        let off = self.source.orbits[o].offsets();
        let mut img = Vec::new();
        for (c, inj) in m.injections.iter().enumerate() {
            img.extend(inj.iter().map(|&p| point[off[c] + p]));
        }
        (m.target, img)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &GMap) -> Result<GMap> {
        if self.target != g.source {
            bail!(Structure, "maps do not compose");
        }
        GMap::from_points(&self.source, &g.target, |o, p| {
            let (t, q) = self.apply(o, p);
            g.apply(t, &q)
        })
    }

    pub fn is_bijective(&self) -> bool {
        let mut hit = alloc::vec![false; self.target.len()];
        for (o, m) in self.orbits.iter().enumerate() {
            if hit[m.target] || self.source.orbits[o] != self.target.orbits[m.target] {
                return false;
            }
            hit[m.target] = true;
        }
        hit.iter().all(|&h| h)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All maps between two transitive sets: one increasing injection from each
/// target arm into the matching source arm.
pub fn transitive_homs(x: &OrbitShape, y: &OrbitShape) -> Result<Vec<GMap>> {
    if x.s() != y.s() {
        bail!(Structure, "shapes over {} and {} coordinates", x.s(), y.s());
    }
    let per: Vec<Vec<Vec<usize>>> = x.arms.iter().zip(&y.arms).map(|(&n, &m)| combinations(n, m)).collect();
    let mut out = Vec::new();
    if per.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let mut pick = alloc::vec![0usize; per.len()];
    loop {
        let injections = pick.iter().zip(&per).map(|(&i, l)| l[i].clone()).collect();
        out.push(GMap {
            source: GSet::transitive(x.clone()),
            target: GSet::transitive(y.clone()),
            orbits: alloc::vec![OrbitMap { target: 0, injections }],
        });
        let mut c = per.len();
        loop {
            if c == 0 {
                return Ok(out);
            }
            c -= 1;
            pick[c] += 1;
            if pick[c] < per[c].len() {
                break;
            }
            pick[c] = 0;
        }
    }
}

/// All invertible self-maps of a transitive set.
pub fn automorphisms(x: &OrbitShape) -> Vec<GMap> {
    transitive_homs(x, x).map(|v| v.into_iter().filter(GMap::is_bijective).collect()).unwrap_or_default()
}

/// Coordinate projection `R^(n) → R^(|keep|)` retaining the listed positions
/// (per group coordinate).
pub fn projection(shape: &OrbitShape, keep: &[Vec<usize>]) -> Result<GMap> {
    let target = OrbitShape::new(keep.iter().map(Vec::len).collect());
    GMap::new(
        GSet::transitive(shape.clone()),
        GSet::transitive(target),
        alloc::vec![OrbitMap { target: 0, injections: keep.to_vec() }],
    )
}
