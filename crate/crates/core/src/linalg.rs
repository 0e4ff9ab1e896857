//! Exact linear algebra over a [`Field`]: echelon forms, kernels, solving,
//! and splitting of split commutative semisimple algebras.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{mulmod, modinv, Field};

/// A subspace kept in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    ncols: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis in place.
    pub fn reduce(&self, v: &mut [F]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (j, r) in row.iter().enumerate() {
                if !r.is_zero() {
                    v[j] = v[j].minus(&c.times(r));
                }
            }
        }
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(F::is_zero)
    }

    /// Add `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = w[p].inverse().expect("nonzero pivot");
        for c in w.iter_mut() {
            if !c.is_zero() {
                *c = c.times(&inv);
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (j, x) in w.iter().enumerate() {
                if !x.is_zero() {
                    row[j] = row[j].minus(&c.times(x));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        true
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let coords: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut w = v.to_vec();
        for (c, row) in coords.iter().zip(&self.rows) {
            for (j, r) in row.iter().enumerate() {
                w[j].add_scaled(&c.negate(), r);
            }
        }
        w.iter().all(F::is_zero).then_some(coords)
    }

    /// Basis of the solutions `x` of `row · x = 0` for all rows.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![F::zero(); self.ncols];
            v[free] = F::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !row[free].is_zero() {
                    v[p] = row[free].negate();
                }
            }
            out.push(v);
        }
        out
    }
}

pub fn rank<F: Field>(vectors: &[Vec<F>], ncols: usize) -> usize {
    let mut e = Echelon::new(ncols);
    for v in vectors {
        e.insert(v);
        if e.rank() == ncols {
            break;
        }
    }
    e.rank()
}

/// Kernel of the matrix whose rows are given.
pub fn nullspace<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
        if e.rank() == ncols {
            break;
        }
    }
    e.kernel()
}

/// Indices of a maximal independent subfamily, chosen greedily in order.
pub fn independent_subset<F: Field>(vectors: &[Vec<F>], ncols: usize) -> Vec<usize> {
    let mut e = Echelon::new(ncols);
    let mut out = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if e.insert(v) {
            out.push(i);
        }
    }
    out
}

/// Some `x` with `Σ_j x_j · columns[j] = target`, if one exists.
pub fn solve_combination<F: Field>(columns: &[Vec<F>], target: &[F]) -> Option<Vec<F>> {
    let m = target.len();
    let n = columns.len();
    // augmented rows: equation i reads Σ_j columns[j][i] x_j = target[i]
    let rows: Vec<Vec<F>> = (0..m)
        .map(|i| {
            let mut r: Vec<F> = columns.iter().map(|c| c[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let mut e = Echelon::new(n + 1);
    for r in &rows {
        e.insert(r);
    }
    if e.pivots().contains(&n) {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (row, &p) in e.rows().iter().zip(e.pivots()) {
        x[p] = row[n].clone();
    }
    Some(x)
}

/// Sparse row: `(column, value)` pairs.
pub type SparseRow<F> = Vec<(usize, F)>;

const MODULUS: u64 = (1 << 61) - 1;

fn reconstruct(x: u64, p: u64) -> Option<(i128, i128)> {
    // extended Euclid stopped at sqrt(p/2)
    let bound = (p / 2).isqrt() as i128;
    let (mut r0, mut r1) = (p as i128, x as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    Some(if t1 < 0 { (-r1, -t1) } else { (r1, t1) })
}

struct ModEchelon {
    p: u64,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl ModEchelon {
    fn insert(&mut self, mut w: Vec<u64>) -> bool {
        let p = self.p;
        for (row, &q) in self.rows.iter().zip(&self.pivots) {
            let c = w[q];
            if c == 0 {
                continue;
            }
            for (j, r) in row.iter().enumerate() {
                if *r != 0 {
                    w[j] = (w[j] + p - mulmod(c, *r, p)) % p;
                }
            }
        }
        let Some(q) = w.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = modinv(w[q], p).expect("prime modulus");
        for c in w.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
        for row in self.rows.iter_mut() {
            let c = row[q];
            if c == 0 {
                continue;
            }
            for (j, x) in w.iter().enumerate() {
                if *x != 0 {
                    row[j] = (row[j] + p - mulmod(c, *x, p)) % p;
                }
            }
        }
        let at = self.pivots.partition_point(|&r| r < q);
        self.pivots.insert(at, q);
        self.rows.insert(at, w);
        true
    }

    fn kernel(&self) -> Vec<Vec<u64>> {
        let mut is_pivot = vec![false; self.ncols];
        for &q in &self.pivots {
            is_pivot[q] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![0u64; self.ncols];
            v[free] = 1;
            for (row, &q) in self.rows.iter().zip(&self.pivots) {
                if row[free] != 0 {
                    v[q] = (self.p - row[free]) % self.p;
                }
            }
            out.push(v);
        }
        out
    }
}

fn row_kills<F: Field>(row: &SparseRow<F>, v: &[F]) -> bool {
    let mut acc = F::zero();
    for (j, c) in row {
        acc.add_scaled(c, &v[*j]);
    }
    acc.is_zero()
}

/// Kernel of a tall sparse system. A modular elimination over a growing
/// sample of rows proposes a kernel, which is lifted by rational
/// reconstruction and then checked exactly against every row; rows that
/// fail the check join the sample. The answer is always exact.
pub fn nullspace_sparse<F: Field>(rows: &[SparseRow<F>], ncols: usize) -> Vec<Vec<F>> {
    let p = MODULUS;
    let reduced: Option<Vec<Vec<(usize, u64)>>> = rows
        .iter()
        .map(|r| r.iter().map(|(j, c)| c.modular(p).map(|m| (*j, m))).collect())
        .collect();
    let Some(reduced) = reduced.filter(|_| F::characteristic() == 0) else {
        return exact_sparse(rows, ncols);
    };
    let dense = |r: &[(usize, u64)]| {
        let mut v = vec![0u64; ncols];
        for (j, c) in r {
            v[*j] = (v[*j] + c) % p;
        }
        v
    };
    let mut ech = ModEchelon { p, ncols, rows: Vec::new(), pivots: Vec::new() };
    let mut used = vec![false; rows.len()];
    // deterministic stride through the rows so the first sample is spread out
    let n = rows.len();
    let stride = (n / 2 + 1..n + 2).find(|s| gcd(*s, n.max(1)) == 1).unwrap_or(1);
    let order: Vec<usize> = (0..n).map(|k| (k * stride) % n.max(1)).collect();
    let mut stall = 0usize;
    for &i in &order {
        if ech.rows.len() == ncols || stall > 2 * ncols + 64 {
            break;
        }
        used[i] = true;
        if ech.insert(dense(&reduced[i])) {
            stall = 0;
        } else {
            stall += 1;
        }
    }
    loop {
        let kern = ech.kernel();
        let lifted: Option<Vec<Vec<F>>> = kern
            .iter()
            .map(|v| {
                v.iter()
                    .map(|&x| {
                        reconstruct(x, p).map(|(a, b)| {
                            F::from_i64(a as i64).over(&F::from_i64(b as i64)).expect("nonzero")
                        })
                    })
                    .collect()
            })
            .collect();
        let Some(lifted) = lifted else {
            return exact_sparse(rows, ncols);
        };
        let mut bad = None;
        'rows: for (i, r) in rows.iter().enumerate() {
            for v in &lifted {
                if !row_kills(r, v) {
                    bad = Some(i);
                    break 'rows;
                }
            }
        }
        match bad {
            None => return lifted,
            Some(i) => {
                if used[i] {
                    // the modular picture disagrees with the exact one
                    return exact_sparse(rows, ncols);
                }
                used[i] = true;
                if !ech.insert(dense(&reduced[i])) {
                    return exact_sparse(rows, ncols);
                }
            }
        }
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn exact_sparse<F: Field>(rows: &[SparseRow<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        let mut v = vec![F::zero(); ncols];
        for (j, c) in r {
            v[*j].add_to(c);
        }
        e.insert(&v);
        if e.rank() == ncols {
            break;
        }
    }
    e.kernel()
}

/// A finite-dimensional commutative algebra given by a basis and a product.
pub struct CommAlgebra<'a, F: Field> {
    pub dim: usize,
    pub unit: Vec<F>,
    pub mul: &'a dyn Fn(&[F], &[F]) -> Vec<F>,
}

fn scale<F: Field>(v: &[F], c: &F) -> Vec<F> {
    v.iter().map(|x| x.times(c)).collect()
}

fn axpy<F: Field>(a: &[F], c: &F, b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.plus(&c.times(y))).collect()
}

impl<F: Field> CommAlgebra<'_, F> {
    fn span_dim(&self, e: &[F]) -> usize {
        let vs: Vec<Vec<F>> = (0..self.dim)
            .map(|i| {
                let mut b = vec![F::zero(); self.dim];
                b[i] = F::one();
                (self.mul)(e, &b)
            })
            .collect();
        rank(&vs, self.dim)
    }

    /// Minimal polynomial of `x` inside the corner algebra with unit `e`,
    /// low degree first and monic.
    pub fn min_poly(&self, x: &[F], e: &[F]) -> Vec<F> {
        let mut powers: Vec<Vec<F>> = vec![e.to_vec()];
        loop {
            let next = (self.mul)(powers.last().expect("nonempty"), x);
            if let Some(c) = solve_combination(&powers, &next) {
                let mut poly: Vec<F> = c.iter().map(F::negate).collect();
                poly.push(F::one());
                return poly;
            }
            powers.push(next);
        }
    }

    /// Primitive idempotents, provided the algebra is split semisimple.
    /// Fails when a minimal polynomial has a non-rational or repeated root.
    pub fn primitive_idempotents(&self) -> Result<Vec<Vec<F>>> {
        if self.unit.iter().all(F::is_zero) {
            return Ok(Vec::new());
        }
        let mut blocks: Vec<Vec<F>> = vec![self.unit.clone()];
        for b in 0..self.dim {
            let mut basis = vec![F::zero(); self.dim];
            basis[b] = F::one();
            let mut next = Vec::new();
            for e in blocks {
                if self.span_dim(&e) == 1 {
                    next.push(e);
                    continue;
                }
                let x = (self.mul)(&e, &basis);
                let poly = self.min_poly(&x, &e);
                if poly.len() == 2 {
                    next.push(e);
                    continue;
                }
                let roots = F::roots(&poly).ok_or(Error::Split("root search unavailable"))?;
                if roots.len() != poly.len() - 1 {
                    return Err(Error::Split("minimal polynomial does not split into distinct linear factors"));
                }
                for (i, r) in roots.iter().enumerate() {
                    // Lagrange projector onto the r-eigenspace of x
                    let mut proj = e.clone();
                    for (j, s) in roots.iter().enumerate() {
                        if i == j {
                            continue;
                        }
                        let factor = axpy(&x, &s.negate(), &e);
                        let denom = r.minus(s).inverse().expect("distinct roots");
                        proj = scale(&(self.mul)(&proj, &factor), &denom);
                    }
                    next.push(proj);
                }
            }
            blocks = next;
        }
        for e in &blocks {
            if self.span_dim(e) != 1 {
                return Err(Error::Split("block stays reducible after all basis elements"));
            }
        }
        Ok(blocks)
    }
}
