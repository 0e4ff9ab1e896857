//! The measure with `μ(R^(n)) = (−1)^n` on sets, maps and stabilizer orbits.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::ordcomb::{GMap, GSet};
use crate::scalar::{Field, Q};

/// `μ(X)`: the sum over orbits of `∏ (−1)^(n_i)`.
pub fn mu_of_set<F: Field>(x: &GSet) -> F {
    x.orbits.iter().fold(F::zero(), |acc, o| acc.plus(&F::sign(o.degree() as i64)))
}

/// Where one free coordinate of a stabilizer orbit sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Slot {
    /// On the pinned point with this index.
    Pin(usize),
    /// In the open interval with this index; interval `t` lies just left of pin `t`.
    Interval(usize),
}

/// Placement of an arm of `n` increasing coordinates among `pins` pinned
/// points: the count in each of the `pins + 1` intervals and which pins are hit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArmPlacement {
    pub counts: Vec<usize>,
    pub hits: Vec<bool>,
}

impl ArmPlacement {
    pub fn slots(&self) -> Vec<Slot> {
        let mut out = Vec::new();
        for (t, &c) in self.counts.iter().enumerate() {
            if t > 0 && self.hits[t - 1] {
                out.push(Slot::Pin(t - 1));
            }
            out.extend(core::iter::repeat_n(Slot::Interval(t), c));
        }
        out
    }

    /// Coordinates left free (not on a pin).
    pub fn free(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// All placements of `n` increasing coordinates among `pins` points, in
/// lexicographically decreasing order of `(c0, h1, c1, …, h_k, c_k)`.
/// For one pin and one coordinate the order is: left, on the pin, right.
pub fn arm_placements(n: usize, pins: usize) -> Vec<ArmPlacement> {
    let mut out = Vec::new();
    let mut counts = vec![0; pins + 1];
    let mut hits = vec![false; pins];
    fn rec(t: usize, left: usize, counts: &mut [usize], hits: &mut [bool], out: &mut Vec<ArmPlacement>) {
        let pins = hits.len();
        if t == pins {
            counts[pins] = left;
            out.push(ArmPlacement { counts: counts.to_vec(), hits: hits.to_vec() });
            return;
        }
        for c in (0..=left).rev() {
            counts[t] = c;
            for h in [true, false] {
                let used = c + usize::from(h);
                if used > left {
                    continue;
                }
                hits[t] = h;
                rec(t + 1, left - used, counts, hits, out);
            }
        }
    }
    rec(0, n, &mut counts, &mut hits, &mut out);
    out
}

/// One orbit of the pointwise stabilizer `G(A)` on a set.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct StabOrbit {
    /// Orbit of the ambient set.
    pub orbit: usize,
    /// A point of the orbit, one increasing vector per group coordinate.
    pub representative: Vec<Vec<Q>>,
    /// Per group coordinate, the slot of each coordinate of the point.
    pub placement: Vec<Vec<Slot>>,
    pub mass: Q,
}

fn interval_points(lo: Option<&Q>, hi: Option<&Q>, count: usize) -> Vec<Q> {
    let step = |i: usize| Q::integer(i as i64);
    match (lo, hi) {
        (None, None) => (1..=count).map(step).collect(),
        (None, Some(h)) => (0..count).map(|i| h.minus(&step(count - i))).collect(),
        (Some(l), None) => (1..=count).map(|i| l.plus(&step(i))).collect(),
        (Some(l), Some(h)) => {
            let width = h.minus(l);
            let parts = Q::integer(count as i64 + 1);
            (1..=count).map(|i| l.plus(&width.times(&step(i)).over(&parts).expect("nonzero"))).collect()
        }
    }
}

/// The `G(A)`-orbits of `y`, where `pins[c]` is the strictly increasing
/// pinned set in group coordinate `c`. Orbits of `y` are taken in order; within
/// one orbit the placements vary with the first group coordinate slowest.
pub fn stabilizer_orbits(y: &GSet, pins: &[Vec<Q>]) -> Result<Vec<StabOrbit>> {
    if pins.len() != y.s {
        bail!(Structure, "pinned sets given for {} coordinates, set has {}", pins.len(), y.s);
    }
    for (c, p) in pins.iter().enumerate() {
        if p.windows(2).any(|w| w[0] >= w[1]) {
            bail!(Invalid, "pinned set of coordinate {c} is not strictly increasing");
        }
    }
    let mut out = Vec::new();
    for (o, shape) in y.orbits.iter().enumerate() {
        let per: Vec<Vec<ArmPlacement>> =
            shape.arms.iter().zip(pins).map(|(&n, p)| arm_placements(n, p.len())).collect();
        let mut pick = vec![0usize; y.s];
        loop {
            let mut representative = Vec::with_capacity(y.s);
            let mut placement = Vec::with_capacity(y.s);
            let mut free = 0;
            for c in 0..y.s {
                let pl = &per[c][pick[c]];
                let p = &pins[c];
                let mut pt = Vec::new();
                for (t, &cnt) in pl.counts.iter().enumerate() {
                    if t > 0 && pl.hits[t - 1] {
                        pt.push(p[t - 1].clone());
                    }
                    pt.extend(interval_points(t.checked_sub(1).map(|i| &p[i]), p.get(t), cnt));
                }
                free += pl.free();
                representative.push(pt);
                placement.push(pl.slots());
            }
            out.push(StabOrbit { orbit: o, representative, placement, mass: Q::sign(free as i64) });
            let mut c = y.s;
            loop {
                if c == 0 {
                    break;
                }
                c -= 1;
                pick[c] += 1;
                if pick[c] < per[c].len() {
                    break;
                }
                pick[c] = 0;
            }
            if pick.iter().all(|&v| v == 0) {
                break;
            }
        }
    }
    Ok(out)
}

/// `μ(f)` for a map onto a transitive set: the measure of a fiber, which is
/// `Σ (−1)^(M − N)` over the source orbits.
pub fn mu_of_map<F: Field>(f: &GMap) -> Result<F> {
    if !f.target.is_transitive() {
        bail!(Precondition, "the measure of a map needs a transitive target");
    }
    let n = f.target.orbits[0].degree() as i64;
    Ok(f.source.orbits.iter().fold(F::zero(), |acc, o| acc.plus(&F::sign(o.degree() as i64 - n))))
}
