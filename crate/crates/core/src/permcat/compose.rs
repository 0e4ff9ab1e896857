//! Convolution. `(ψ∘φ)(z, x) = ∫ ψ(z, y) φ(y, x) dy`, where the integral
//! runs over the orbits of the stabilizer of `(z, x)` on `Y`; an orbit in
//! which `m` coordinates of `y` avoid every coordinate of `z` and `x` has
//! mass `(−1)^m`.

use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::kernel::{Kernel, Pt};
use super::Morphism;
use crate::context::Cat;
use crate::error::{bail, Result};
use crate::ordcomb::{for_each_orbit, product_orbit_count, project_key, shuffle_words, word_count, GSet, OrbitShape};
use crate::scalar::Field;

/// Orbits of `Z × Y × X`, each recorded as `(k, i, j, mass)` with `k`, `i`,
/// `j` its images in `Z × X`, `Z × Y` and `Y × X`. Stored grouped by `i`.
pub struct TripleTable {
    offsets: Vec<u32>,
    entries: Vec<(u32, u32, bool)>,
}

impl TripleTable {
    pub fn build(cat: &Cat, z: &GSet, y: &GSet, x: &GSet) -> Result<TripleTable> {
        let count = product_orbit_count(&[z.clone(), y.clone(), x.clone()]);
        if count > cat.caps.max_triples as u128 {
            bail!(Cap, "{count} triple orbits exceed the cap {}", cat.caps.max_triples);
        }
        let zx = cat.pair(z, x)?;
        let zy = cat.pair(z, y)?;
        let yx = cat.pair(y, x)?;
        let mut raw: Vec<(u32, u32, u32, bool)> = Vec::with_capacity(count as usize);
        let mut key = Vec::new();
        let mut missing = false;
        for_each_orbit(&[z.clone(), y.clone(), x.clone()], |choice, words| {
            let mut look = |a: usize, b: usize, p: &crate::ordcomb::Product| {
                project_key(choice, words, a, b, &mut key);
                p.lookup_key(&key).map(|v| v as u32)
            };
            let (Some(k), Some(i), Some(j)) = (look(0, 2, &zx), look(0, 1, &zy), look(1, 2, &yx)) else {
                missing = true;
                return;
            };
            let lonely = words.iter().map(|w| w.iter().filter(|&&m| m == 0b010).count()).sum::<usize>();
            raw.push((i, k, j, lonely % 2 == 1));
        })?;
        if missing {
            bail!(Structure, "a triple orbit projects outside the pair index");
        }
        let mut offsets = vec![0u32; zy.len() + 1];
        for r in &raw {
            offsets[r.0 as usize + 1] += 1;
        }
        for i in 0..zy.len() {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut entries = vec![(0u32, 0u32, false); raw.len()];
        for (i, k, j, neg) in raw {
            let slot = &mut fill[i as usize];
            entries[*slot as usize] = (k, j, neg);
            *slot += 1;
        }
        Ok(TripleTable { offsets, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries `(k, j, negative)` with middle pair orbit `i`.
    pub fn row(&self, i: usize) -> &[(u32, u32, bool)] {
        &self.entries[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub fn rows(&self) -> usize {
        self.offsets.len() - 1
    }

    /// `(ψ∘φ)` from the coefficient vectors of `ψ` on `Z × Y` and `φ` on `Y × X`.
    pub fn apply<F: Field>(&self, psi: &[F], phi: &[F], out: &mut [F]) {
        for (i, p) in psi.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let neg = p.negate();
            for &(k, j, n) in self.row(i) {
                let f = &phi[j as usize];
                if !f.is_zero() {
                    out[k as usize].add_scaled(if n { &neg } else { p }, f);
                }
            }
        }
    }
}

/// A point fixed during a placement enumeration.
pub(crate) struct Fixed<'a> {
    pub shape: &'a OrbitShape,
    pub point: &'a [i64],
    /// Whether the point belongs to the integrated-out middle object.
    pub middle: bool,
}

/// Number of placements of `free` around pinned sets of the given sizes.
pub(crate) fn placement_count(free: &GSet, pins: &[usize]) -> u128 {
    free.orbits
        .iter()
        .map(|o| o.arms.iter().zip(pins).map(|(&a, &p)| word_count(&[a, p])).product::<u128>())
        .sum()
}

/// Enumerate the orbits of the stabilizer of the `fixed` points on `free`.
/// `visit` receives the free orbit and point, the fixed points relabeled into
/// the same coordinates, and the number of columns occupied only by middle
/// points: by the free point itself when `free_is_middle`, otherwise by fixed
/// points flagged `middle` that the free point avoids.
pub(crate) fn placements_around(
    free: &GSet,
    fixed: &[Fixed<'_>],
    free_is_middle: bool,
    words: &mut HashMap<(usize, usize), Rc<Vec<Vec<u8>>>>,
    mut visit: impl FnMut(usize, &[i64], &[Vec<i64>], usize),
) {
    let s = free.s;
    // per coordinate: sorted distinct pinned values and whether a middle-only point owns them
    let mut pins: Vec<Vec<i64>> = Vec::with_capacity(s);
    let mut lonely: Vec<Vec<bool>> = Vec::with_capacity(s);
    let offs: Vec<Vec<usize>> = fixed.iter().map(|f| f.shape.offsets()).collect();
    for c in 0..s {
        let mut vals: Vec<(i64, bool)> = Vec::new();
        for (f, off) in fixed.iter().zip(&offs) {
            vals.extend(f.point[off[c]..off[c + 1]].iter().map(|&v| (v, f.middle)));
        }
        vals.sort_unstable();
        let mut p: Vec<i64> = Vec::new();
        let mut l: Vec<bool> = Vec::new();
        for (v, m) in vals {
            if p.last() == Some(&v) {
                let last = l.last_mut().expect("parallel");
                *last = *last && m;
            } else {
                p.push(v);
                l.push(m);
            }
        }
        pins.push(p);
        lonely.push(l);
    }
    let mut relabeled: Vec<Vec<i64>> = fixed.iter().map(|f| vec![0; f.point.len()]).collect();
    let mut column_of: Vec<Vec<i64>> = pins.iter().map(|p| vec![0; p.len()]).collect();
    let mut point = Vec::new();
    for (fo, shape) in free.orbits.iter().enumerate() {
        let lists: Vec<Rc<Vec<Vec<u8>>>> = (0..s)
            .map(|c| {
                let key = (shape.arms[c], pins[c].len());
                words.entry(key).or_insert_with(|| Rc::new(shuffle_words(&[key.0, key.1]))).clone()
            })
            .collect();
        if lists.iter().any(|l| l.is_empty()) {
            continue;
        }
        let mut pick = vec![0usize; s];
        loop {
            point.clear();
            let mut count = 0;
            for c in 0..s {
                let w = &lists[c][pick[c]];
                let mut pin = 0;
                for (col, &m) in w.iter().enumerate() {
                    let v = col as i64 + 1;
                    if m & 1 != 0 {
                        point.push(v);
                    }
                    if m & 2 != 0 {
                        column_of[c][pin] = v;
                        if m == 2 && !free_is_middle && lonely[c][pin] {
                            count += 1;
                        }
                        pin += 1;
                    } else if free_is_middle {
                        count += 1;
                    }
                }
            }
            for ((f, off), out) in fixed.iter().zip(&offs).zip(relabeled.iter_mut()) {
                for c in 0..s {
                    for t in off[c]..off[c + 1] {
                        let r = pins[c].binary_search(&f.point[t]).expect("pinned");
                        out[t] = column_of[c][r];
                    }
                }
            }
            visit(fo, &point, &relabeled, count);
            let mut c = s;
            loop {
                if c == 0 {
                    break;
                }
                c -= 1;
                pick[c] += 1;
                if pick[c] < lists[c].len() {
                    break;
                }
                pick[c] = 0;
            }
            if pick.iter().all(|&v| v == 0) {
                break;
            }
        }
    }
}

/// `∫_{y ∈ Y} f(y)` over the stabilizer of the given points.
pub fn integrate<F: Field>(
    y: &GSet,
    fixed: &[(&OrbitShape, &[i64])],
    mut f: impl FnMut(Pt<'_>, &[Vec<i64>]) -> F,
) -> F {
    let fx: Vec<Fixed<'_>> = fixed.iter().map(|&(shape, point)| Fixed { shape, point, middle: false }).collect();
    let mut acc = F::zero();
    let mut words = HashMap::new();
    placements_around(y, &fx, true, &mut words, |yo, pt, rel, lonely| {
        let v = f((yo, pt), rel);
        if !v.is_zero() {
            if lonely % 2 == 1 {
                acc = acc.minus(&v);
            } else {
                acc.add_to(&v);
            }
        }
    });
    acc
}

/// One nonzero value of a morphism: target point, source point, value.
#[derive(Clone, Debug)]
pub struct SupportEntry<F> {
    pub y: (usize, Vec<i64>),
    pub x: (usize, Vec<i64>),
    pub value: F,
}

/// `ψ∘φ` given the support of `φ`, enumerating `z` around each support point.
pub fn compose_right_support<F: Field>(
    cat: &Cat,
    psi: &dyn Kernel<F>,
    phi: &[SupportEntry<F>],
    x: &GSet,
) -> Result<Morphism<F>> {
    let z = psi.target().clone();
    let y = psi.source();
    let out_pair = cat.pair(&z, x)?;
    let mut out = vec![F::zero(); out_pair.len()];
    let mut words = HashMap::new();
    for e in phi {
        let fixed = [
            Fixed { shape: &x.orbits[e.x.0], point: &e.x.1, middle: false },
            Fixed { shape: &y.orbits[e.y.0], point: &e.y.1, middle: true },
        ];
        let mut fail = false;
        placements_around(&z, &fixed, false, &mut words, |zo, zpt, rel, lonely| {
            let p = psi.at((zo, zpt), (e.y.0, &rel[1]));
            if p.is_zero() {
                return;
            }
            let Some(k) = out_pair.locate(&[(zo, zpt), (e.x.0, &rel[0])]) else {
                fail = true;
                return;
            };
            let v = p.times(&e.value);
            if lonely % 2 == 1 {
                out[k] = out[k].minus(&v);
            } else {
                out[k].add_to(&v);
            }
        });
        if fail {
            bail!(Structure, "placement fell outside the result index");
        }
    }
    Ok(Morphism { source: x.clone(), target: z, coeffs: out })
}

/// `ψ∘φ` given the support of `ψ`, enumerating `x` around each support point.
pub fn compose_left_support<F: Field>(
    cat: &Cat,
    psi: &[SupportEntry<F>],
    phi: &dyn Kernel<F>,
    z: &GSet,
) -> Result<Morphism<F>> {
    let x = phi.source().clone();
    let y = phi.target();
    let out_pair = cat.pair(z, &x)?;
    let mut out = vec![F::zero(); out_pair.len()];
    let mut words = HashMap::new();
    for e in psi {
        let fixed = [
            Fixed { shape: &z.orbits[e.y.0], point: &e.y.1, middle: false },
            Fixed { shape: &y.orbits[e.x.0], point: &e.x.1, middle: true },
        ];
        let mut fail = false;
        placements_around(&x, &fixed, false, &mut words, |xo, xpt, rel, lonely| {
            let p = phi.at((e.x.0, &rel[1]), (xo, xpt));
            if p.is_zero() {
                return;
            }
            let Some(k) = out_pair.locate(&[(e.y.0, &rel[0]), (xo, xpt)]) else {
                fail = true;
                return;
            };
            let v = p.times(&e.value);
            if lonely % 2 == 1 {
                out[k] = out[k].minus(&v);
            } else {
                out[k].add_to(&v);
            }
        });
        if fail {
            bail!(Structure, "placement fell outside the result index");
        }
    }
    Ok(Morphism { source: x, target: z.clone(), coeffs: out })
}

/// Cached composition table for `Z × Y × X`, built on first use.
pub fn table(cat: &Cat, z: &GSet, y: &GSet, x: &GSet) -> Result<Rc<TripleTable>> {
    let key = (z.clone(), y.clone(), x.clone());
    if let Some(t) = cat.cached_table(&key) {
        return Ok(t);
    }
    let t = Rc::new(TripleTable::build(cat, z, y, x)?);
    if t.len() <= cat.caps.max_cached_table {
        cat.store_table(key, t.clone());
    }
    Ok(t)
}

fn support_cost(free: &GSet, pair_shapes: &GSet, support: &[usize]) -> u128 {
    support.iter().map(|&i| placement_count(free, &pair_shapes.orbits[i].arms)).sum()
}

/// `ψ ∘ φ`. Uses a cached triple table when one exists, streams around the
/// sparser support when that is much cheaper, and otherwise builds the table.
pub fn compose<F: Field>(cat: &Cat, psi: &Morphism<F>, phi: &Morphism<F>) -> Result<Morphism<F>> {
    if psi.source != phi.target {
        bail!(Structure, "cannot compose: middle objects {} and {} differ", psi.source, phi.target);
    }
    let (z, y, x) = (&psi.target, &psi.source, &phi.source);
    let key = (z.clone(), y.clone(), x.clone());
    let out_pair = cat.pair(z, x)?;
    if let Some(t) = cat.cached_table(&key) {
        let mut out = vec![F::zero(); out_pair.len()];
        t.apply(&psi.coeffs, &phi.coeffs, &mut out);
        return Ok(Morphism { source: x.clone(), target: z.clone(), coeffs: out });
    }
    let total = product_orbit_count(&[z.clone(), y.clone(), x.clone()]);
    let zy = cat.pair(z, y)?;
    let yx = cat.pair(y, x)?;
    let cost_b = support_cost(x, zy.gset(), &psi.support());
    let cost_c = support_cost(z, yx.gset(), &phi.support());
    let sparse = cost_b.min(cost_c);
    let stream = sparse.saturating_mul(4) < total
        || (total > cat.caps.max_cached_table as u128 && sparse <= cat.caps.max_triples as u128);
    if stream {
        return if cost_b <= cost_c {
            compose_left_support(cat, &psi.support_entries(cat)?, &phi.kernel(cat)?, z)
        } else {
            compose_right_support(cat, &psi.kernel(cat)?, &phi.support_entries(cat)?, x)
        };
    }
    let t = table(cat, z, y, x)?;
    let mut out = vec![F::zero(); out_pair.len()];
    t.apply(&psi.coeffs, &phi.coeffs, &mut out);
    Ok(Morphism { source: x.clone(), target: z.clone(), coeffs: out })
}
