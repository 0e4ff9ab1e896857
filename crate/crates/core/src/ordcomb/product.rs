use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::shape::{shuffle_words, word_count, GSet, OrbitShape};
use crate::error::{bail, Result};

/// One orbit of a product of sets: the orbit chosen in each factor and, per
/// group coordinate, a word of column masks (bit `i` marks factor `i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Amalgam {
    pub factors: Vec<usize>,
    pub words: Vec<Vec<u8>>,
}

impl Amalgam {
    /// Shape of the orbit: the number of columns per coordinate.
    pub fn shape(&self) -> OrbitShape {
        OrbitShape::new(self.words.iter().map(Vec::len).collect())
    }
}

impl fmt::Display for Amalgam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, w) in self.words.iter().enumerate() {
            if c > 0 {
                write!(f, " | ")?;
            }
            write!(f, "(")?;
            for col in w {
                write!(f, "{{")?;
                let mut first = true;
                for i in 0..8 {
                    if col & (1 << i) != 0 {
                        if !first {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", i + 1)?;
                        first = false;
                    }
                }
                write!(f, "}}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Byte key identifying an amalgam: factor orbit indices followed by the
/// words, each terminated by a zero byte.
pub(crate) fn push_key_head(key: &mut Vec<u8>, factors: &[usize]) {
    for &f in factors {
        key.extend_from_slice(&(f as u32).to_le_bytes());
    }
}

/// Key of the projection of a product orbit onto factors `i` and `j`.
pub(crate) fn project_key(choice: &[usize], words: &[&[u8]], i: usize, j: usize, key: &mut Vec<u8>) {
    key.clear();
    push_key_head(key, &[choice[i], choice[j]]);
    for w in words {
        for &m in *w {
            let b = ((m >> i) & 1) | (((m >> j) & 1) << 1);
            if b != 0 {
                key.push(b);
            }
        }
        key.push(0);
    }
}

/// Visit every orbit of the product of `factors` in canonical order.
pub(crate) fn for_each_orbit(
    factors: &[GSet],
    mut visit: impl FnMut(&[usize], &[&[u8]]),
) -> Result<()> {
    let k = factors.len();
    if k == 0 || k > 8 {
        bail!(Structure, "products take between one and eight factors, got {k}");
    }
    let s = factors[0].s;
    if let Some(g) = factors.iter().find(|g| g.s != s) {
        bail!(Structure, "factor over {} coordinates in a product over {s}", g.s);
    }
    if factors.iter().any(GSet::is_empty) {
        return Ok(());
    }
    let mut words_cache: HashMap<Vec<usize>, Vec<Vec<u8>>> = HashMap::new();
    let mut choice = vec![0usize; k];
    loop {
        let lists: Vec<Vec<Vec<u8>>> = (0..s)
            .map(|c| {
                let arms: Vec<usize> =
                    (0..k).map(|i| factors[i].orbits[choice[i]].arms[c]).collect();
                words_cache.entry(arms.clone()).or_insert_with(|| shuffle_words(&arms)).clone()
            })
            .collect();
        let mut pick = vec![0usize; s];
        'words: loop {
            let words: Vec<&[u8]> = (0..s).map(|c| lists[c][pick[c]].as_slice()).collect();
            visit(&choice, &words);
            let mut c = s;
            loop {
                if c == 0 {
                    break 'words;
                }
                c -= 1;
                pick[c] += 1;
                if pick[c] < lists[c].len() {
                    break;
                }
                pick[c] = 0;
            }
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < factors[i].orbits.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Number of orbits of the product, without enumerating them.
pub fn product_orbit_count(factors: &[GSet]) -> u128 {
    if factors.is_empty() || factors.iter().any(GSet::is_empty) {
        return 0;
    }
    let s = factors[0].s;
    let k = factors.len();
    let mut total: u128 = 0;
    let mut choice = vec![0usize; k];
    loop {
        let mut prod: u128 = 1;
        for c in 0..s {
            let arms: Vec<usize> = (0..k).map(|i| factors[i].orbits[choice[i]].arms[c]).collect();
            prod = prod.saturating_mul(word_count(&arms));
        }
        total = total.saturating_add(prod);
        let mut i = k;
        loop {
            if i == 0 {
                return total;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < factors[i].orbits.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// The orbits of a product of sets, indexed in canonical order.
pub struct Product {
    factors: Vec<GSet>,
    gset: GSet,
    keys: Vec<Box<[u8]>>,
    index: HashMap<Box<[u8]>, u32>,
}

impl fmt::Debug for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Product").field("factors", &self.factors).field("orbits", &self.keys.len()).finish()
    }
}

impl Product {
    pub fn new(factors: &[GSet], max_orbits: usize) -> Result<Product> {
        let count = product_orbit_count(factors);
        if count > max_orbits as u128 {
            bail!(Cap, "product has {count} orbits, cap is {max_orbits}");
        }
        let s = factors.first().map_or(1, |g| g.s);
        let mut keys = Vec::with_capacity(count as usize);
        let mut index = HashMap::with_capacity(count as usize);
        let mut orbits = Vec::with_capacity(count as usize);
        let mut key = Vec::new();
        for_each_orbit(factors, |choice, words| {
            key.clear();
            push_key_head(&mut key, choice);
            for w in words {
                key.extend_from_slice(w);
                key.push(0);
            }
            let b: Box<[u8]> = key.as_slice().into();
            index.insert(b.clone(), keys.len() as u32);
            keys.push(b);
            orbits.push(OrbitShape::new(words.iter().map(|w| w.len()).collect()));
        })?;
        Ok(Product { factors: factors.to_vec(), gset: GSet { s, orbits }, keys, index })
    }

    pub fn factors(&self) -> &[GSet] {
        &self.factors
    }

    /// The product as a set in its own right: one transitive orbit per amalgam.
    pub fn gset(&self) -> &GSet {
        &self.gset
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn shape(&self, idx: usize) -> &OrbitShape {
        &self.gset.orbits[idx]
    }

    pub fn factor_orbits(&self, idx: usize) -> Vec<usize> {
        let key = &self.keys[idx];
        (0..self.factors.len())
            .map(|i| u32::from_le_bytes(key[4 * i..4 * i + 4].try_into().expect("4 bytes")) as usize)
            .collect()
    }

    /// Per-coordinate column words of an orbit.
    pub fn words(&self, idx: usize) -> Vec<&[u8]> {
        let key = &self.keys[idx];
        let body = &key[4 * self.factors.len()..];
        let mut out = Vec::with_capacity(self.gset.s);
        let mut start = 0;
        for (i, b) in body.iter().enumerate() {
            if *b == 0 {
                out.push(&body[start..i]);
                start = i + 1;
            }
        }
        out
    }

    pub fn amalgam(&self, idx: usize) -> Amalgam {
        Amalgam {
            factors: self.factor_orbits(idx),
            words: self.words(idx).into_iter().map(<[u8]>::to_vec).collect(),
        }
    }

    pub fn amalgams(&self) -> Vec<Amalgam> {
        (0..self.len()).map(|i| self.amalgam(i)).collect()
    }

    pub fn index_of(&self, a: &Amalgam) -> Option<usize> {
        let mut key = Vec::new();
        push_key_head(&mut key, &a.factors);
        for w in &a.words {
            key.extend_from_slice(w);
            key.push(0);
        }
        self.index.get(key.as_slice()).map(|&i| i as usize)
    }

    pub(crate) fn lookup_key(&self, key: &[u8]) -> Option<usize> {
        self.index.get(key).map(|&i| i as usize)
    }

    /// Split a point of orbit `idx` (flat, one value per column) into the
    /// points of the factors.
    pub fn split(&self, idx: usize, point: &[i64]) -> Vec<(usize, Vec<i64>)> {
        let fo = self.factor_orbits(idx);
        let words = self.words(idx);
        let k = self.factors.len();
        let mut out: Vec<(usize, Vec<i64>)> = fo
            .iter()
            .enumerate()
            .map(|(i, &o)| (o, Vec::with_capacity(self.factors[i].orbits[o].degree())))
            .collect();
        let mut pos = 0;
        for w in &words {
            for &mask in *w {
                for (i, part) in out.iter_mut().enumerate().take(k) {
                    if mask & (1 << i) != 0 {
                        part.1.push(point[pos]);
                    }
                }
                pos += 1;
            }
        }
        out
    }

    /// Factor points of the canonical representative of orbit `idx`.
    pub fn representative(&self, idx: usize) -> Vec<(usize, Vec<i64>)> {
        self.split(idx, &self.gset.orbits[idx].representative())
    }

    /// Locate factor points and return the orbit index with the merged point.
    pub fn join(&self, parts: &[(usize, &[i64])]) -> Option<(usize, Vec<i64>)> {
        let mut key = Vec::new();
        let merged = encode_points(&self.factors, parts, &mut key)?;
        self.lookup_key(&key).map(|i| (i, merged))
    }

    pub fn locate(&self, parts: &[(usize, &[i64])]) -> Option<usize> {
        let mut key = Vec::new();
        encode_points(&self.factors, parts, &mut key)?;
        self.lookup_key(&key)
    }

    /// The orbit containing a configuration of points with values in any
    /// totally ordered type. `parts[i]` gives the orbit of factor `i` and its
    /// point as one strictly increasing vector per group coordinate.
    pub fn orbit_of_point<T: Ord>(&self, parts: &[(usize, Vec<Vec<T>>)]) -> Result<usize> {
        if parts.len() != self.factors.len() {
            bail!(Invalid, "expected {} factor points, got {}", self.factors.len(), parts.len());
        }
        let s = self.gset.s;
        let mut flat: Vec<Vec<i64>> = vec![Vec::new(); parts.len()];
        for c in 0..s {
            let mut all: Vec<&T> = Vec::new();
            for (i, (o, pt)) in parts.iter().enumerate() {
                let Some(shape) = self.factors[i].orbits.get(*o) else {
                    bail!(Invalid, "factor {i} has no orbit {o}");
                };
                if pt.len() != s || pt[c].len() != shape.arms[c] {
                    bail!(Invalid, "factor {i} point does not match its shape");
                }
                if pt[c].windows(2).any(|w| w[0] >= w[1]) {
                    bail!(Invalid, "factor {i} coordinate {c} is not strictly increasing");
                }
                all.extend(pt[c].iter());
            }
            all.sort();
            all.dedup();
            for (i, (_, pt)) in parts.iter().enumerate() {
                for v in &pt[c] {
                    let r = all.binary_search(&v).expect("present") as i64;
                    flat[i].push(r);
                }
            }
        }
        let refs: Vec<(usize, &[i64])> =
            parts.iter().zip(&flat).map(|((o, _), p)| (*o, p.as_slice())).collect();
        match self.locate(&refs) {
            Some(i) => Ok(i),
            None => bail!(Invalid, "no orbit matches the configuration"),
        }
    }
}

/// Build the key of the orbit containing the given factor points; returns
/// the merged point (distinct values per coordinate).
pub(crate) fn encode_points(
    factors: &[GSet],
    parts: &[(usize, &[i64])],
    key: &mut Vec<u8>,
) -> Option<Vec<i64>> {
    key.clear();
    let k = factors.len();
    if parts.len() != k {
        return None;
    }
    for (o, _) in parts {
        key.extend_from_slice(&(*o as u32).to_le_bytes());
    }
    let s = factors[0].s;
    let mut offs: Vec<usize> = vec![0; k];
    let mut merged = Vec::new();
    let mut buf: Vec<(i64, u8)> = Vec::new();
    for c in 0..s {
        buf.clear();
        for (i, (o, pt)) in parts.iter().enumerate() {
            let n = factors[i].orbits.get(*o)?.arms[c];
            let seg = pt.get(offs[i]..offs[i] + n)?;
            offs[i] += n;
            buf.extend(seg.iter().map(|&v| (v, 1u8 << i)));
        }
        buf.sort_unstable();
        let mut j = 0;
        while j < buf.len() {
            let v = buf[j].0;
            let mut mask = 0u8;
            while j < buf.len() && buf[j].0 == v {
                if mask & buf[j].1 != 0 {
                    return None;
                }
                mask |= buf[j].1;
                j += 1;
            }
            key.push(mask);
            merged.push(v);
        }
        key.push(0);
    }
    Some(merged)
}
