//! The acceptance suite behind `verify`. Each item checks one family of
//! statements at a scale derived from `--max-n`; items run on a pool of
//! worker threads, each with its own computation context.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use delannoy_core::algcls::*;
use delannoy_core::karoubi::*;
use delannoy_core::ordcomb::{
    automorphisms, equivalence_relations, projection, verify_product_relations, GSet, OrbitShape,
};
use delannoy_core::permcat::laws::{associativity, interchange, snake, unit_law};
use delannoy_core::permcat::{hom_dim, Morphism};
use delannoy_core::{Cat, Error, Field, Q};
use serde::Serialize;

use crate::args::SuiteKind;

#[derive(Clone, Debug, Serialize)]
pub struct ItemReport {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
    /// The item stopped at a size cap rather than at a failed check.
    pub capped: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub max_n: usize,
    pub pass: bool,
    pub items: Vec<ItemReport>,
}

enum Failure {
    Check(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Step = Result<String, Failure>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(Failure::Check(format!($($msg)+)));
        }
    };
}

struct Env<'a> {
    cat: Cat,
    reg: &'a Registry<Q>,
    k: usize,
}

type Item = (&'static str, fn(&Env) -> Step);

const ITEMS: [Item; 14] = [
    ("Delannoy Hom dimensions", hom_dimensions),
    ("decomposition of C(R^n)", decomposition),
    ("dimensions of simples", dimensions),
    ("restriction rule", restriction_rule),
    ("tensor rules", tensor_rules),
    ("duality", duality),
    ("E-idempotents and subalgebras", e_idempotent_items),
    ("sub-étale counterexample", sub_etale),
    ("étale positives", etale_positives),
    ("category laws", category_laws),
    ("split-group suite", split_group),
    ("restriction ideals and lengths", proof_machinery),
    ("adjunction transfer", adjunction),
    ("classification instances", classification),
];

/// Registry depth the suite needs at this scale.
pub fn registry_depth(kind: SuiteKind, max_n: usize) -> usize {
    scale(kind, max_n)
}

fn scale(kind: SuiteKind, max_n: usize) -> usize {
    match kind {
        SuiteKind::All => max_n,
        SuiteKind::Fast => max_n.min(2),
    }
}

pub fn run(reg: &Registry<Q>, kind: SuiteKind, max_n: usize, threads: usize) -> SuiteReport {
    let k = scale(kind, max_n);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<ItemReport>>> = Mutex::new(vec![None; ITEMS.len()]);
    std::thread::scope(|s| {
        for _ in 0..threads.clamp(1, ITEMS.len()) {
            s.spawn(|| {
                let env = Env { cat: Cat::new(), reg, k };
                loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some(&(name, item)) = ITEMS.get(i) else { break };
                    let start = Instant::now();
                    let outcome = catch_unwind(AssertUnwindSafe(|| item(&env)))
                        .unwrap_or_else(|_| Err(Failure::Check("panicked".into())));
                    let seconds = (start.elapsed().as_secs_f64() * 1000.0).round() / 1000.0;
                    let (pass, detail, capped) = match outcome {
                        Ok(d) => (true, d, false),
                        Err(Failure::Check(d)) => (false, d, false),
                        Err(Failure::Core(e)) => (false, e.to_string(), matches!(e, Error::Cap(_))),
                    };
                    results.lock().expect("unpoisoned")[i] =
                        Some(ItemReport { id: i + 1, name, pass, detail, seconds, capped });
                }
            });
        }
    });
    let items: Vec<ItemReport> = results.into_inner().expect("unpoisoned").into_iter().flatten().collect();
    SuiteReport {
        suite: match kind {
            SuiteKind::All => "all",
            SuiteKind::Fast => "fast",
        },
        max_n,
        pass: items.iter().all(|i| i.pass),
        items,
    }
}

fn delannoy_table(n: usize, m: usize) -> Vec<Vec<u128>> {
    let mut t = vec![vec![1u128; m + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=m {
            t[i][j] = t[i - 1][j] + t[i][j - 1] + t[i - 1][j - 1];
        }
    }
    t
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn words(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..n {
        out = out.iter().flat_map(|w| [format!("{w}a"), format!("{w}b")]).collect();
    }
    out
}

fn lab(s: &str) -> SimpleLabel {
    SimpleLabel::new(s).expect("word over a, b")
}

fn tup(parts: &[&str]) -> LabelTuple {
    LabelTuple(parts.iter().map(|s| lab(s)).collect())
}

fn sign(n: usize) -> Q {
    if n % 2 == 0 {
        Q::one()
    } else {
        Q::one().negate()
    }
}

fn arm_vectors(s: usize, total: usize) -> Vec<Vec<usize>> {
    if s == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for d in 0..=total {
        for mut rest in arm_vectors(s - 1, total - d) {
            rest.insert(0, d);
            out.push(rest);
        }
    }
    out
}

fn sample(cat: &Cat, x: &GSet, y: &GSet, salt: i64) -> Result<Morphism<Q>, Error> {
    let n = hom_dim(x, y) as i64;
    let coeffs = (0..n).map(|k| Q::integer((k * 7 + salt * 13 + k * k * salt) % 9 - 4)).collect();
    Morphism::from_coeffs(cat, x, y, coeffs)
}

fn coordinate_pullbacks(cat: &Cat, shape: &OrbitShape) -> Result<BTreeSet<Vec<String>>, Error> {
    let mut keeps: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for &arm in &shape.arms {
        keeps = keeps
            .into_iter()
            .flat_map(|k| {
                (0..1usize << arm).map(move |mask| {
                    let mut k = k.clone();
                    k.push((0..arm).filter(|i| mask >> i & 1 == 1).collect());
                    k
                })
            })
            .collect();
    }
    keeps.iter().map(|k| Ok(coeff_key(&Morphism::pullback(cat, &projection(shape, k)?)?))).collect()
}

fn coeff_key(m: &Morphism<Q>) -> Vec<String> {
    let mut key = vec![m.source.to_string()];
    key.extend(m.coeffs.iter().map(ToString::to_string));
    key
}

fn hom_dimensions(e: &Env) -> Step {
    let top = e.k + 1;
    let d = delannoy_table(top, top);
    for n in 0..=top {
        for m in 0..=top {
            let orbits = e.cat.pair(&GSet::line(m), &GSet::line(n))?.len() as u128;
            check!(orbits == d[n][m], "Hom(C(R^{n}), C(R^{m})) has {orbits} orbits, expected {}", d[n][m]);
        }
    }
    Ok(format!("n, m ≤ {top}"))
}

fn decomposition(e: &Env) -> Step {
    for n in 0..=e.k {
        let d = decompose(&e.cat, e.reg, &KObject::whole(&e.cat, &GSet::line(n))?)?;
        let want: BTreeMap<LabelTuple, usize> =
            (0..=n).flat_map(|l| words(l).into_iter().map(move |w| (tup(&[&w]), binomial(n, l)))).collect();
        check!(d.parts == want, "C(R^{n}) decomposes as {:?}", d.parts);
    }
    Ok(format!("n ≤ {}", e.k))
}

fn dimensions(e: &Env) -> Step {
    for n in 0..=e.k {
        for w in words(n) {
            let d = e.reg.object(&lab(&w))?.dim(&e.cat)?;
            check!(d == sign(n), "dim L_{w} = {d}");
        }
    }
    Ok(format!("ℓ ≤ {}", e.k))
}

fn restriction_rule(e: &Env) -> Step {
    let top = e.k.min(3);
    for n in 0..=top {
        for w in words(n) {
            check!(verify_restriction_rule(&e.cat, e.reg, &lab(&w))?.holds, "Res L_{w}");
        }
    }
    if top >= 2 {
        let ab = verify_restriction_rule(&e.cat, e.reg, &lab("ab"))?.observed;
        let want: BTreeMap<LabelTuple, usize> =
            [tup(&["", "ab"]), tup(&["a", "b"]), tup(&["ab", ""]), tup(&["", "b"]), tup(&["a", ""])]
                .into_iter()
                .map(|t| (t, 1))
                .collect();
        check!(ab == want, "Res L_ab = {ab:?}");
    }
    Ok(format!("ℓ ≤ {top}"))
}

fn tensor_rules(e: &Env) -> Step {
    if e.k < 2 {
        return Ok("skipped below n = 2".into());
    }
    let m = |xs: &[(&str, usize)]| xs.iter().map(|(w, k)| (lab(w), *k)).collect::<BTreeMap<_, _>>();
    for (l, r, want) in [
        ("a", "a", m(&[("aa", 2), ("a", 1)])),
        ("b", "b", m(&[("bb", 2), ("b", 1)])),
        ("a", "b", m(&[("ab", 1), ("ba", 1), ("a", 1), ("b", 1), ("", 1)])),
    ] {
        let got = tensor_decompose(&e.cat, e.reg, &lab(l), &lab(r))?.simple_parts();
        check!(got == want, "L_{l} ⊗ L_{r} = {got:?}");
    }
    Ok("a⊗a, b⊗b, a⊗b".into())
}

fn duality(e: &Env) -> Step {
    let pairs = e.k.min(2);
    for n in 0..=pairs {
        for w in words(n) {
            check!(dual_label_check(&e.cat, e.reg, &lab(&w), pairs)?.holds, "dual of L_{w}");
        }
    }
    let top = e.k.min(3);
    for n in 0..=top {
        for w in words(n) {
            check!(is_self_dual(&e.cat, e.reg, &lab(&w))? == (n == 0), "self-duality of L_{w}");
        }
    }
    Ok(format!("duals ℓ ≤ {pairs}, self-dual ℓ ≤ {top}"))
}

fn e_idempotent_items(e: &Env) -> Step {
    for n in 0..=e.k {
        let x = GSet::line(n);
        let found = e_idempotents::<Q>(&e.cat, &x)?;
        let rels = equivalence_relations(&e.cat, &x)?;
        check!(found.len() == 1 << n, "C(R^{n}) has {} E-idempotents", found.len());
        check!(found.iter().map(|i| &i.relation).eq(rels.iter()), "C(R^{n}): relations differ");
    }
    for n in 0..=e.k {
        let found: BTreeSet<Vec<String>> =
            etale_subalgebras::<Q>(&e.cat, &GSet::line(n))?.iter().map(|s| coeff_key(&s.embedding)).collect();
        check!(found == coordinate_pullbacks(&e.cat, &OrbitShape::line(n))?, "subalgebras of C(R^{n})");
    }
    Ok(format!("n ≤ {}", e.k))
}

fn sub_etale(e: &Env) -> Step {
    if e.k < 1 {
        return Ok("skipped below n = 1".into());
    }
    let a = subetale_example(&e.cat, e.reg)?;
    let whole = schwartz_algebra::<Q>(&e.cat, &GSet::line(1))?;
    subalgebra(&e.cat, &whole, &a.carrier.idem)?;
    check!(gamma(&e.cat, &a)?.dim() == 1, "invariants are not the ground field");
    check!(!is_etale(&e.cat, &a)?.etale, "L_a ⊕ 1 reported étale");
    check!(!relative_tensor_exactness(&e.cat, &a, &whole, &a.carrier.idem)?.exact, "relative tensor product exact");
    Ok("closed, Γ = k, not étale, not exact".into())
}

fn etale_positives(e: &Env) -> Step {
    let top = e.k.min(3);
    for n in 0..=top {
        let r = is_etale(&e.cat, &schwartz_algebra::<Q>(&e.cat, &GSet::line(n))?)?;
        check!(r.etale && r.unit_trace == sign(n), "C(R^{n}): étale {} with ε(1) = {}", r.etale, r.unit_trace);
    }
    Ok(format!("n ≤ {top}"))
}

fn category_laws(e: &Env) -> Step {
    let cat = &e.cat;
    for s in 1..=2 {
        for arms in arm_vectors(s, e.k) {
            let x = GSet::transitive(OrbitShape::new(arms));
            check!(snake::<Q>(cat, &x)?, "snake fails on {x}");
        }
    }
    for d in arm_vectors(2, e.k) {
        check!(unit_law(cat, &sample(cat, &GSet::line(d[0]), &GSet::line(d[1]), 1)?)?, "unit law on {d:?}");
    }
    for d in arm_vectors(4, e.k) {
        let x: Vec<GSet> = d.iter().map(|&n| GSet::line(n)).collect();
        let (f, g, h) = (sample(cat, &x[0], &x[1], 1)?, sample(cat, &x[1], &x[2], 2)?, sample(cat, &x[2], &x[3], 3)?);
        check!(associativity(cat, &h, &g, &f)?, "associativity on {d:?}");
    }
    for d in arm_vectors(6, e.k) {
        let x: Vec<GSet> = d.iter().map(|&n| GSet::line(n)).collect();
        let (c, a) = (sample(cat, &x[0], &x[1], 1)?, sample(cat, &x[1], &x[2], 2)?);
        let (f, b) = (sample(cat, &x[3], &x[4], 3)?, sample(cat, &x[4], &x[5], 4)?);
        check!(interchange(cat, &a, &b, &c, &f)?, "interchange on {d:?}");
    }
    Ok(format!("total arm ≤ {}", e.k))
}

fn split_group(e: &Env) -> Step {
    for s in 1..=3 {
        for arms in arm_vectors(s, e.k) {
            let shape = OrbitShape::new(arms);
            let n = automorphisms(&shape).len();
            check!(n == 1, "{shape} has {n} automorphisms");
        }
    }
    let top = e.k.min(3);
    for n in 0..=top {
        for m in 0..=top {
            let count = verify_product_relations(&e.cat, &OrbitShape::line(n), &OrbitShape::line(m))?;
            check!(count == 1 << (n + m), "R^{n} ⊠ R^{m} has {count} relations");
        }
    }
    Ok(format!("automorphisms arm ≤ {}, relations n, m ≤ {top}", e.k))
}

fn proof_machinery(e: &Env) -> Step {
    let top = e.k.min(3);
    for n in 1..=top {
        check!(restriction_ideals(&e.cat, e.reg, n)?.is_case_a(), "n = {n} is not in the first case");
    }
    if e.k >= 2 {
        let c2 = KObject::whole(&e.cat, &GSet::line(2))?;
        let s = length_stats(&e.cat, e.reg, &c2)?;
        check!(s.total == 2 && s.top_length == 4, "C(R^2): total {}, top {}", s.total, s.top_length);
        let s = length_stats(&e.cat, e.reg, &restrict(&e.cat, &c2, 0)?)?;
        check!(s.per_coord == [2, 2] && s.total == 2, "Res C(R^2): {:?}, total {}", s.per_coord, s.total);
    }
    Ok(format!("ideals n ≤ {top}"))
}

fn adjunction(e: &Env) -> Step {
    if e.k < 1 {
        return Ok("skipped below n = 1".into());
    }
    let cat = &e.cat;
    let line = schwartz_algebra::<Q>(cat, &GSet::line(1))?;
    let one = schwartz_algebra::<Q>(cat, &GSet::point(1))?;
    let mut cases = vec![
        ("C(R)", line.clone(), 1, evaluation_at_pins(cat, 1)?),
        ("1", one, 1, Morphism::identity(cat, &GSet::point(2))?),
    ];
    if e.k >= 2 {
        cases.push(("C(R^2)", schwartz_algebra(cat, &GSet::line(2))?, 2, evaluation_at_pins(cat, 2)?));
    }
    for (name, a, pins, f) in &cases {
        let t = adjunction_transfer(cat, a, *pins, f)?;
        check!(t.recovers_f && t.algebra_hom, "{name}: transfer failed");
    }
    Ok(format!("{} examples", cases.len()))
}

fn classification(e: &Env) -> Step {
    let cat = &e.cat;
    let top = e.k.min(3);
    for n in 0..=top {
        let whole = schwartz_algebra::<Q>(cat, &GSet::line(n))?;
        check!(is_simple(cat, e.reg, &whole)?.verdict == Simplicity::Simple, "C(R^{n}) is not simple");
        for s in etale_subalgebras::<Q>(cat, &GSet::line(n))? {
            let sub = schwartz_algebra::<Q>(cat, &s.quotient)?;
            let simple = is_simple(cat, e.reg, &sub)?.verdict == Simplicity::Simple;
            let line = s.quotient == GSet::line(s.quotient.max_arms()[0]);
            check!(is_etale(cat, &sub)?.etale && simple && line, "subalgebra {} of C(R^{n})", s.quotient);
        }
    }
    let mut pairs = 0;
    for a in 1..=2 {
        for b in 1..=2 {
            if a + b > e.k {
                continue;
            }
            let shape = OrbitShape::new(vec![a, b]);
            let found: BTreeSet<Vec<String>> = etale_subalgebras::<Q>(cat, &GSet::transitive(shape.clone()))?
                .iter()
                .map(|s| coeff_key(&s.embedding))
                .collect();
            check!(found == coordinate_pullbacks(cat, &shape)?, "{shape} has a non-product subalgebra");
            pairs += 1;
        }
    }
    Ok(format!("n ≤ {top}, {pairs} products over two coordinates"))
}
