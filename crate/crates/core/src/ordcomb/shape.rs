use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

/// A transitive set for `G^s`: the product of `R^(n_i)` over the group
/// coordinates, one arm per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(transparent))]
pub struct OrbitShape {
    pub arms: Vec<usize>,
}

impl OrbitShape {
    pub fn new(arms: Vec<usize>) -> Self {
        assert!(!arms.is_empty(), "an orbit shape needs at least one coordinate");
        OrbitShape { arms }
    }

    pub fn line(n: usize) -> Self {
        OrbitShape { arms: vec![n] }
    }

    pub fn point(s: usize) -> Self {
        OrbitShape { arms: vec![0; s] }
    }

    pub fn s(&self) -> usize {
        self.arms.len()
    }

    /// Total number of coordinates over all group factors.
    pub fn degree(&self) -> usize {
        self.arms.iter().sum()
    }

    /// Offsets of each group coordinate inside a flat point.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.arms.len() + 1);
        let mut acc = 0;
        out.push(0);
        for a in &self.arms {
            acc += a;
            out.push(acc);
        }
        out
    }

    /// The canonical integer representative `1..n` in every coordinate.
    pub fn representative(&self) -> Vec<i64> {
        self.arms.iter().flat_map(|&n| 1..=n as i64).collect()
    }

    /// Check a flat point against the shape.
    pub fn validate(&self, point: &[i64]) -> Result<()> {
        if point.len() != self.degree() {
            bail!(Invalid, "point has {} entries, shape needs {}", point.len(), self.degree());
        }
        let off = self.offsets();
        for c in 0..self.s() {
            let seg = &point[off[c]..off[c + 1]];
            if seg.windows(2).any(|w| w[0] >= w[1]) {
                bail!(Invalid, "coordinate {c} is not strictly increasing");
            }
        }
        Ok(())
    }

    /// Concatenate shapes: the external product of the two transitive sets.
    pub fn boxtimes(&self, other: &OrbitShape) -> OrbitShape {
        let mut arms = self.arms.clone();
        arms.extend_from_slice(&other.arms);
        OrbitShape { arms }
    }
}

impl fmt::Display for OrbitShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.arms.iter().enumerate() {
            if i > 0 {
                write!(f, "⊠")?;
            }
            write!(f, "R^{n}")?;
        }
        Ok(())
    }
}

/// A finitary set for `G^s`, given as an ordered list of orbits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GSet {
    pub s: usize,
    pub orbits: Vec<OrbitShape>,
}

impl GSet {
    pub fn new(s: usize, orbits: Vec<OrbitShape>) -> Result<Self> {
        if s == 0 {
            bail!(Structure, "a set needs at least one group coordinate");
        }
        if let Some(o) = orbits.iter().find(|o| o.s() != s) {
            bail!(Structure, "orbit {o} does not live over {s} coordinates");
        }
        Ok(GSet { s, orbits })
    }

    pub fn empty(s: usize) -> Self {
        GSet { s, orbits: Vec::new() }
    }

    pub fn point(s: usize) -> Self {
        GSet { s, orbits: vec![OrbitShape::point(s)] }
    }

    /// `R^(n)` for the group `G`.
    pub fn line(n: usize) -> Self {
        GSet { s: 1, orbits: vec![OrbitShape::line(n)] }
    }

    pub fn transitive(shape: OrbitShape) -> Self {
        GSet { s: shape.s(), orbits: vec![shape] }
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits.len() == 1
    }

    pub fn max_arms(&self) -> Vec<usize> {
        let mut out = vec![0; self.s];
        for o in &self.orbits {
            for (m, a) in out.iter_mut().zip(&o.arms) {
                *m = (*m).max(*a);
            }
        }
        out
    }

    /// Disjoint union; orbit lists are concatenated.
    pub fn dsum(&self, other: &GSet) -> Result<GSet> {
        if self.s != other.s {
            bail!(Structure, "disjoint union over {} and {} coordinates", self.s, other.s);
        }
        let mut orbits = self.orbits.clone();
        orbits.extend_from_slice(&other.orbits);
        Ok(GSet { s: self.s, orbits })
    }

    /// External product for `G^a × G^b`, orbits ordered with the left factor major.
    pub fn boxtimes(&self, other: &GSet) -> GSet {
        let orbits = self
            .orbits
            .iter()
            .flat_map(|a| other.orbits.iter().map(move |b| a.boxtimes(b)))
            .collect();
        GSet { s: self.s + other.s, orbits }
    }
}

impl fmt::Display for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orbits.is_empty() {
            return write!(f, "∅");
        }
        for (i, o) in self.orbits.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊔ ")?;
            }
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Number of shuffle words in which factor `i` fills `arms[i]` columns:
/// inclusion-exclusion over the column count.
pub fn word_count(arms: &[usize]) -> u128 {
    let total: usize = arms.iter().sum();
    let lo = arms.iter().copied().max().unwrap_or(0);
    if total == 0 {
        return 1;
    }
    let mut sum: i128 = 0;
    for c in lo..=total {
        for j in 0..=c {
            let mut prod: i128 = binomial(c, j) as i128;
            for &n in arms {
                prod *= binomial(c - j, n) as i128;
                if prod == 0 {
                    break;
                }
            }
            if j % 2 == 0 {
                sum += prod;
            } else {
                sum -= prod;
            }
        }
    }
    sum as u128
}

/// All words of nonempty column masks in which factor `i` (bit `i`) occurs
/// exactly `arms[i]` times, in lexicographic order.
pub fn shuffle_words(arms: &[usize]) -> Vec<Vec<u8>> {
    assert!(arms.len() <= 8, "at most eight factors per product");
    let mut out = Vec::new();
    let mut rest = arms.to_vec();
    let mut word = Vec::new();
    fn rec(rest: &mut [usize], word: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let live: u8 = rest
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .fold(0, |m, (i, _)| m | (1 << i));
        if live == 0 {
            out.push(word.clone());
            return;
        }
        // submasks of `live` in increasing numeric order
        for mask in 1..=live {
            if mask & !live != 0 {
                continue;
            }
            for (i, r) in rest.iter_mut().enumerate() {
                if mask & (1 << i) != 0 {
                    *r -= 1;
                }
            }
            word.push(mask);
            rec(rest, word, out);
            word.pop();
            for (i, r) in rest.iter_mut().enumerate() {
                if mask & (1 << i) != 0 {
                    *r += 1;
                }
            }
        }
    }
    rec(&mut rest, &mut word, &mut out);
    out
}

/// Delannoy number by its defining recurrence.
pub fn delannoy(n: usize, m: usize) -> u128 {
    let mut t = vec![vec![1u128; m + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=m {
            t[i][j] = t[i - 1][j] + t[i][j - 1] + t[i - 1][j - 1];
        }
    }
    t[n][m]
}
