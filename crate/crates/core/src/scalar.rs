//! Exact scalars: rationals with a machine-word fast path, and prime fields.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arithmetic every coefficient type must support. All operations are exact.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;
    /// Image in `Z/p`, `None` when the denominator vanishes there.
    fn modular(&self, p: u64) -> Option<u64>;
    /// All roots in the field of a polynomial given low degree first.
    /// `None` when the search cannot be carried out.
    fn roots(poly: &[Self]) -> Option<Vec<Self>>;
    /// A total order used only for deterministic tie-breaking.
    fn canonical_cmp(&self, other: &Self) -> Ordering;
    /// Characteristic of the field, 0 for the rationals.
    fn characteristic() -> u64;
    /// Parse the textual form produced by `Display`.
    fn parse(s: &str) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn add_to(&mut self, o: &Self) {
        *self = self.plus(o);
    }
    fn add_scaled(&mut self, c: &Self, o: &Self) {
        if !c.is_zero() && !o.is_zero() {
            *self = self.plus(&c.times(o));
        }
    }
    fn over(&self, o: &Self) -> Option<Self> {
        o.inverse().map(|i| self.times(&i))
    }
    fn sign(s: i64) -> Self {
        if s.rem_euclid(2) == 0 {
            Self::one()
        } else {
            Self::one().negate()
        }
    }
}

/// Exact rational number. Values that fit in an `i64` numerator and
/// denominator are stored inline; everything else spills to big integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Q {
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Q {
    pub fn new(num: i64, den: i64) -> Q {
        assert!(den != 0, "zero denominator");
        Q::from_i128(num as i128, den as i128)
    }

    pub fn integer(v: i64) -> Q {
        Q::from_i128(v as i128, 1)
    }

    fn from_i128(mut n: i128, mut d: i128) -> Q {
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_i128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n > i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128 {
            Q::Small(n as i64, d as i64)
        } else {
            Q::Big(BigRational::new(BigInt::from(n), BigInt::from(d)))
        }
    }

    fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Q::Small(n, d),
            _ => Q::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Q::Small(n, _) => BigInt::from(*n),
            Q::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Q::Small(_, d) => BigInt::from(*d),
            Q::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, d) => *d == 1,
            Q::Big(r) => r.is_integer(),
        }
    }

    fn big_op(&self, o: &Q, f: impl Fn(BigRational, BigRational) -> BigRational) -> Q {
        Q::from_big(f(self.to_big(), o.to_big()))
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{n}"),
            Q::Small(n, d) => write!(f, "{n}/{d}"),
            Q::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Q::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Q {
    fn from(v: i64) -> Q {
        Q::integer(v)
    }
}

fn divisors(n: &BigInt, limit: u64) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Some(Vec::new());
    }
    let v = n.to_u64()?;
    if v > limit {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= v {
        if v % i == 0 {
            out.push(BigInt::from(i));
            if i * i != v {
                out.push(BigInt::from(v / i));
            }
        }
        i += 1;
    }
    Some(out)
}

fn eval_poly<F: Field>(poly: &[F], x: &F) -> F {
    let mut acc = F::zero();
    for c in poly.iter().rev() {
        acc = acc.times(x).plus(c);
    }
    acc
}

/// Divide `poly` by `(x - r)`; the remainder is assumed zero.
fn deflate<F: Field>(poly: &[F], r: &F) -> Vec<F> {
    let d = poly.len() - 1;
    let mut out = alloc::vec![F::zero(); d];
    let mut carry = F::zero();
    for i in (0..d).rev() {
        carry = poly[i + 1].plus(&carry.times(r));
        out[i] = carry.clone();
    }
    out
}

fn trim<F: Field>(mut p: Vec<F>) -> Vec<F> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

impl Field for Q {
    fn zero() -> Self {
        Q::Small(0, 1)
    }
    fn one() -> Self {
        Q::Small(1, 1)
    }
    fn from_i64(v: i64) -> Self {
        Q::integer(v)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }
    fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }
    fn plus(&self, o: &Self) -> Self {
        match (self, o) {
            (Q::Small(0, _), _) => o.clone(),
            (_, Q::Small(0, _)) => self.clone(),
            (Q::Small(a, b), Q::Small(c, d)) => {
                if b == d {
                    Q::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    let n = *a as i128 * *d as i128 + *c as i128 * *b as i128;
                    let den = *b as i128 * *d as i128;
                    Q::from_i128(n, den)
                }
            }
            _ => self.big_op(o, |x, y| x + y),
        }
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn times(&self, o: &Self) -> Self {
        match (self, o) {
            (Q::Small(0, _), _) | (_, Q::Small(0, _)) => Q::zero(),
            (Q::Small(1, 1), _) => o.clone(),
            (_, Q::Small(1, 1)) => self.clone(),
            (Q::Small(a, b), Q::Small(c, d)) => {
                Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => self.big_op(o, |x, y| x * y),
        }
    }
    fn negate(&self) -> Self {
        match self {
            Q::Small(n, d) => Q::Small(-n, *d),
            Q::Big(r) => Q::from_big(-r.clone()),
        }
    }
    fn inverse(&self) -> Option<Self> {
        match self {
            Q::Small(0, _) => None,
            Q::Small(n, d) => Some(Q::from_i128(*d as i128, *n as i128)),
            Q::Big(r) => Some(Q::from_big(r.recip())),
        }
    }
    fn modular(&self, p: u64) -> Option<u64> {
        let (n, d) = match self {
            Q::Small(n, d) => (
                (*n as i128).rem_euclid(p as i128) as u64,
                (*d as i128).rem_euclid(p as i128) as u64,
            ),
            Q::Big(r) => {
                let pb = BigInt::from(p);
                (
                    r.numer().mod_floor(&pb).to_u64().unwrap_or(0),
                    r.denom().mod_floor(&pb).to_u64().unwrap_or(0),
                )
            }
        };
        let di = modinv(d, p)?;
        Some(mulmod(n, di, p))
    }
    fn roots(poly: &[Self]) -> Option<Vec<Self>> {
        let mut p = trim(poly.to_vec());
        if p.len() <= 1 {
            return Some(Vec::new());
        }
        let mut roots = Vec::new();
        while p.len() > 1 && p[0].is_zero() {
            if !roots.contains(&Q::zero()) {
                roots.push(Q::zero());
            }
            p.remove(0);
        }
        if p.len() <= 1 {
            return Some(roots);
        }
        // clear denominators
        let mut l = BigInt::one();
        for c in &p {
            l = l.lcm(&c.denom());
        }
        let ints: Vec<BigInt> = p.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let a0 = &ints[0];
        let ad = &ints[ints.len() - 1];
        const LIMIT: u64 = 1 << 40;
        let nums = divisors(a0, LIMIT)?;
        let dens = divisors(ad, LIMIT)?;
        let mut cands: Vec<Q> = Vec::new();
        for n in &nums {
            for d in &dens {
                let q = Q::from_big(BigRational::new(n.clone(), d.clone()));
                for c in [q.clone(), q.negate()] {
                    if !cands.contains(&c) {
                        cands.push(c);
                    }
                }
            }
        }
        cands.sort();
        for c in cands {
            while p.len() > 1 && eval_poly(&p, &c).is_zero() {
                if !roots.contains(&c) {
                    roots.push(c.clone());
                }
                p = deflate(&p, &c);
            }
        }
        roots.sort();
        Some(roots)
    }
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn characteristic() -> u64 {
        0
    }
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::from_big(BigRational::new(n, d)))
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn modinv(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(powmod(a, p - 2, p))
    }
}

/// Element of the prime field `Z/P`. `P` must be prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(pub u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp((v as i128).rem_euclid(P as i128) as u64)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn plus(&self, o: &Self) -> Self {
        Fp(((self.0 as u128 + o.0 as u128) % P as u128) as u64)
    }
    fn minus(&self, o: &Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - o.0 as u128) % P as u128) as u64)
    }
    fn times(&self, o: &Self) -> Self {
        Fp(mulmod(self.0, o.0, P))
    }
    fn negate(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn inverse(&self) -> Option<Self> {
        modinv(self.0, P).map(Fp)
    }
    fn modular(&self, p: u64) -> Option<u64> {
        (p == P).then_some(self.0)
    }
    fn roots(poly: &[Self]) -> Option<Vec<Self>> {
        let p = trim(poly.to_vec());
        if p.len() <= 1 {
            return Some(Vec::new());
        }
        if P > 1 << 20 {
            return None;
        }
        Some((0..P).map(Fp).filter(|x| eval_poly(&p, x).is_zero()).collect())
    }
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
    fn characteristic() -> u64 {
        P
    }
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let s = s.split_once(' ').map_or(s, |(a, _)| a);
        s.parse::<i64>().ok().map(Fp::new)
    }
}

/// Render a coefficient vector as strings.
pub fn render<F: Field>(v: &[F]) -> Vec<String> {
    v.iter().map(|c| alloc::format!("{c}")).collect()
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for Q {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.collect_str(self)
        }
    }

    impl<'de> Deserialize<'de> for Q {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let s = String::deserialize(d)?;
            <Q as Field>::parse(&s).ok_or_else(|| D::Error::custom("malformed rational"))
        }
    }
}
