//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use delannoy_core::algcls::*;
use delannoy_core::karoubi::*;
use delannoy_core::ordcomb::{
    automorphisms, equivalence_relations, projection, verify_product_relations, GSet, OrbitShape, RelationTables,
};
use delannoy_core::permcat::laws::{associativity, interchange, snake, unit_law};
use delannoy_core::permcat::{hom_dim, Morphism};
use delannoy_core::{Cat, Field, Q};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

// ---- oracles ----

fn delannoy_oracle(n: usize, m: usize) -> u128 {
    let mut t = vec![vec![1u128; m + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=m {
            t[i][j] = t[i - 1][j] + t[i][j - 1] + t[i - 1][j - 1];
        }
    }
    t[n][m]
}

fn binomial_oracle(n: usize, k: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![1usize; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

fn words(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..n {
        out = out.iter().flat_map(|w| [format!("{w}a"), format!("{w}b")]).collect();
    }
    out
}

fn lab(s: &str) -> SimpleLabel {
    SimpleLabel::new(s).unwrap()
}

fn tup(parts: &[&str]) -> LabelTuple {
    LabelTuple(parts.iter().map(|s| lab(s)).collect())
}

fn restriction_oracle(w: &str) -> BTreeMap<LabelTuple, usize> {
    let mut out = BTreeMap::new();
    for i in 0..=w.len() {
        *out.entry(tup(&[&w[..i], &w[i..]])).or_insert(0) += 1;
    }
    for i in 0..w.len() {
        *out.entry(tup(&[&w[..i], &w[i + 1..]])).or_insert(0) += 1;
    }
    out
}

fn sign(n: usize) -> Q {
    if n % 2 == 0 { Q::one() } else { Q::one().negate() }
}

/// Arm vectors over `s` coordinates with total at most `total`.
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

fn sample(cat: &Cat, x: &GSet, y: &GSet, salt: i64) -> Morphism<Q> {
    let n = hom_dim(x, y) as i64;
    let coeffs = (0..n).map(|k| Q::integer((k * 7 + salt * 13 + k * k * salt) % 9 - 4)).collect();
    Morphism::from_coeffs(cat, x, y, coeffs).unwrap()
}

fn coordinate_pullbacks(cat: &Cat, shape: &OrbitShape) -> Vec<Morphism<Q>> {
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
    keeps.iter().map(|k| Morphism::pullback(cat, &projection(shape, k).unwrap()).unwrap()).collect()
}

fn sorted(mut v: Vec<Morphism<Q>>) -> Vec<Morphism<Q>> {
    v.sort_by_key(|m| format!("{m:?}"));
    v
}

fn evaluation_at_pin(cat: &Cat) -> Morphism<Q> {
    let r = Restriction::new(&GSet::line(1), 0, 1).unwrap();
    Morphism::from_fn(cat, &r.set, &GSet::point(2), |_, x| if r.origin(x.0).1.hits[0] { Q::one() } else { Q::zero() })
        .unwrap()
}

// ---- criteria ----

struct Ctx {
    cat: Cat,
    reg: Registry<Q>,
}

fn hom_dimensions(cx: &Ctx) -> Outcome {
    let start = Instant::now();
    for n in 0..=5 {
        for m in 0..=5 {
            let (x, y) = (GSet::line(n), GSet::line(m));
            let want = delannoy_oracle(n, m);
            let orbits = ok(cx.cat.pair(&y, &x))?.len() as u128;
            ensure!(orbits == want && hom_dim(&x, &y) == want, "Hom(C(R^{n}), C(R^{m})): {orbits} vs {want}");
        }
    }
    ensure!(start.elapsed() < Duration::from_secs(10), "took {:?}", start.elapsed());
    Ok(())
}

fn decomposition_table(cx: &Ctx, build: Duration) -> Outcome {
    let start = Instant::now();
    for n in 0..=4 {
        let d = ok(decompose(&cx.cat, &cx.reg, &ok(KObject::whole(&cx.cat, &GSet::line(n)))?))?;
        let mut want = BTreeMap::new();
        for l in 0..=n {
            for w in words(l) {
                want.insert(tup(&[&w]), binomial_oracle(n, l));
            }
        }
        ensure!(d.parts == want, "C(R^{n}) decomposes as {:?}", d.parts);
    }
    let total = build + start.elapsed();
    ensure!(total < Duration::from_secs(600), "took {total:?}");
    Ok(())
}

fn dimensions(cx: &Ctx) -> Outcome {
    for n in 0..=4 {
        for w in words(n) {
            let d = ok(ok(cx.reg.object(&lab(&w)))?.dim(&cx.cat))?;
            ensure!(d == sign(n), "dim L_{w} = {d}");
        }
    }
    Ok(())
}

fn restriction_rule(cx: &Ctx) -> Outcome {
    for n in 0..=3 {
        for w in words(n) {
            let r = ok(verify_restriction_rule(&cx.cat, &cx.reg, &lab(&w)))?;
            ensure!(r.holds && r.observed == restriction_oracle(&w), "Res L_{w} = {:?}", r.observed);
        }
    }
    let ab = ok(verify_restriction_rule(&cx.cat, &cx.reg, &lab("ab")))?.observed;
    let table: BTreeMap<LabelTuple, usize> =
        [tup(&["", "ab"]), tup(&["a", "b"]), tup(&["ab", ""]), tup(&["", "b"]), tup(&["a", ""])]
            .into_iter()
            .map(|t| (t, 1))
            .collect();
    ensure!(ab == table, "Res L_ab = {ab:?}");
    Ok(())
}

fn tensor_rules(cx: &Ctx) -> Outcome {
    let m = |xs: &[(&str, usize)]| xs.iter().map(|(w, k)| (lab(w), *k)).collect::<BTreeMap<_, _>>();
    for (l, r, want) in [
        ("a", "a", m(&[("aa", 2), ("a", 1)])),
        ("b", "b", m(&[("bb", 2), ("b", 1)])),
        ("a", "b", m(&[("ab", 1), ("ba", 1), ("a", 1), ("b", 1), ("", 1)])),
    ] {
        let got = ok(tensor_decompose(&cx.cat, &cx.reg, &lab(l), &lab(r)))?.simple_parts();
        ensure!(got == want, "L_{l} ⊗ L_{r} = {got:?}");
    }
    Ok(())
}

fn duality(cx: &Ctx) -> Outcome {
    for n in 0..=2 {
        for w in words(n) {
            let r = ok(dual_label_check(&cx.cat, &cx.reg, &lab(&w), 2))?;
            let swapped: String = w.chars().map(|c| if c == 'a' { 'b' } else { 'a' }).collect();
            ensure!(r.holds && r.partners == vec![lab(&swapped)], "dual of L_{w}: {:?}", r.partners);
        }
    }
    for n in 0..=3 {
        for w in words(n) {
            ensure!(ok(is_self_dual(&cx.cat, &cx.reg, &lab(&w)))? == (n == 0), "self-duality of L_{w}");
        }
    }
    Ok(())
}

fn e_idempotent_classification(cx: &Ctx) -> Outcome {
    for n in 0..=4 {
        let x = GSet::line(n);
        let found = ok(e_idempotents::<Q>(&cx.cat, &x))?;
        ensure!(found.len() == 1 << n, "R^{n}: {} E-idempotents", found.len());
        let tables = ok(RelationTables::new(&cx.cat, &x))?;
        let rels: BTreeSet<Vec<usize>> = found.iter().map(|e| e.relation.orbits.clone()).collect();
        ensure!(rels.len() == found.len(), "R^{n}: repeated relations");
        for e in &found {
            ensure!(tables.is_equivalence(&tables.members(&e.relation)), "R^{n}: not an equivalence relation");
        }
        let all: BTreeSet<Vec<usize>> =
            ok(equivalence_relations(&cx.cat, &x))?.into_iter().map(|r| r.orbits).collect();
        ensure!(rels == all, "R^{n}: relations differ from the equivalence relations");
    }
    for n in 0..=4 {
        let subs = ok(etale_subalgebras::<Q>(&cx.cat, &GSet::line(n)))?;
        let found = sorted(subs.iter().map(|s| s.embedding.clone()).collect());
        ensure!(found == sorted(coordinate_pullbacks(&cx.cat, &OrbitShape::line(n))), "subalgebras of C(R^{n})");
        for s in &subs {
            let m = s.quotient.max_arms()[0];
            ensure!(s.quotient == GSet::line(m), "quotient {} is not a line", s.quotient);
        }
    }
    Ok(())
}

fn sub_etale_counterexample(cx: &Ctx) -> Outcome {
    let a = ok(subetale_example(&cx.cat, &cx.reg))?;
    let whole = ok(schwartz_algebra::<Q>(&cx.cat, &GSet::line(1)))?;
    ok(subalgebra(&cx.cat, &whole, &a.carrier.idem))?;
    ensure!(ok(check_axioms(&cx.cat, &a))?.holds(), "axioms fail");
    ensure!(ok(gamma(&cx.cat, &a))?.dim() == 1, "invariants are not k");
    let r = ok(is_etale(&cx.cat, &a))?;
    ensure!(!r.etale && r.witness.is_some(), "reported étale");
    let ex = ok(relative_tensor_exactness(&cx.cat, &a, &whole, &a.carrier.idem))?;
    ensure!(!ex.exact, "relative tensor product is exact: {ex:?}");
    Ok(())
}

fn etale_positives(cx: &Ctx) -> Outcome {
    for n in 0..=3 {
        let a = ok(schwartz_algebra::<Q>(&cx.cat, &GSet::line(n)))?;
        let r = ok(is_etale(&cx.cat, &a))?;
        ensure!(r.etale && r.inverse.is_some(), "C(R^{n}) not étale");
        ensure!(r.unit_trace == sign(n), "ε(1) = {} on C(R^{n})", r.unit_trace);
    }
    Ok(())
}

fn category_laws(cx: &Ctx) -> Outcome {
    let cat = &cx.cat;
    let mut objects: Vec<GSet> = Vec::new();
    for s in 1..=2 {
        for arms in arm_vectors(s, 4) {
            objects.push(GSet::transitive(OrbitShape::new(arms)));
        }
    }
    objects.push(ok(GSet::line(1).dsum(&GSet::point(1)))?);
    objects.push(ok(GSet::line(2).dsum(&GSet::line(1)))?);
    let degree = |x: &GSet| x.max_arms().iter().sum::<usize>();
    for x in &objects {
        ensure!(ok(snake::<Q>(cat, x))?, "snake fails on {x}");
        for y in objects.iter().filter(|y| y.s == x.s && degree(x) + degree(y) <= 4) {
            ensure!(ok(unit_law(cat, &sample(cat, x, y, 1)))?, "unit law fails on {x} → {y}");
        }
    }
    for d in arm_vectors(4, 4) {
        let x: Vec<GSet> = d.iter().map(|&n| GSet::line(n)).collect();
        let (f, g, h) = (sample(cat, &x[0], &x[1], 1), sample(cat, &x[1], &x[2], 2), sample(cat, &x[2], &x[3], 3));
        ensure!(ok(associativity(cat, &h, &g, &f))?, "associativity fails on {d:?}");
    }
    for d in arm_vectors(6, 4) {
        let x: Vec<GSet> = d.iter().map(|&n| GSet::line(n)).collect();
        let (c, a) = (sample(cat, &x[0], &x[1], 1), sample(cat, &x[1], &x[2], 2));
        let (e, b) = (sample(cat, &x[3], &x[4], 3), sample(cat, &x[4], &x[5], 4));
        ensure!(ok(interchange(cat, &a, &b, &c, &e))?, "interchange fails on {d:?}");
    }
    Ok(())
}

fn split_group(cx: &Ctx) -> Outcome {
    for s in 1..=3 {
        for arms in arm_vectors(s, 4) {
            let shape = OrbitShape::new(arms);
            let autos = automorphisms(&shape);
            ensure!(autos.len() == 1 && autos[0].is_bijective(), "{shape} has {} automorphisms", autos.len());
        }
    }
    for n in 0..=3 {
        for m in 0..=3 {
            let count = ok(verify_product_relations(&cx.cat, &OrbitShape::line(n), &OrbitShape::line(m)))?;
            ensure!(count == 1 << (n + m), "R^{n} ⊠ R^{m}: {count} relations");
        }
    }
    Ok(())
}

fn proof_machinery(cx: &Ctx) -> Outcome {
    for n in 1..=3 {
        let r = ok(restriction_ideals(&cx.cat, &cx.reg, n))?;
        ensure!(r.is_case_a() && r.product_zero, "n = {n}: {r:?}");
    }
    let c2 = ok(KObject::whole(&cx.cat, &GSet::line(2)))?;
    let s = ok(length_stats(&cx.cat, &cx.reg, &c2))?;
    let top: BTreeMap<LabelTuple, usize> = ["aa", "ab", "ba", "bb"].iter().map(|w| (tup(&[w]), 1)).collect();
    ensure!(s.total == 2 && s.top_length == 4 && s.top == top, "C(R^2): {s:?}");
    let res = ok(restrict(&cx.cat, &c2, 0))?;
    let s = ok(length_stats(&cx.cat, &cx.reg, &res))?;
    ensure!(s.per_coord == vec![2, 2] && s.total == 2, "Res C(R^2): {s:?}");
    Ok(())
}

fn adjunction(cx: &Ctx) -> Outcome {
    let cat = &cx.cat;
    let line = ok(schwartz_algebra::<Q>(cat, &GSet::line(1)))?;
    let one = ok(schwartz_algebra::<Q>(cat, &GSet::point(1)))?;
    let plane = ok(schwartz_algebra::<Q>(cat, &GSet::line(2)))?;
    let cases = [
        ("C(R)", &line, 1, evaluation_at_pin(cat), ok(Morphism::identity(cat, &GSet::line(1)))?),
        ("1", &one, 1, ok(Morphism::identity(cat, &GSet::point(2)))?, line.unit.clone()),
        ("C(R^2)", &plane, 2, ok(evaluation_at_pins(cat, 2))?, ok(Morphism::identity(cat, &GSet::line(2)))?),
    ];
    for (name, a, pins, f, want) in cases {
        let t = ok(adjunction_transfer(cat, a, pins, &f))?;
        ensure!(t.recovers_f && t.algebra_hom && t.g == want, "{name}: transfer failed");
        let target = ok(schwartz_algebra::<Q>(cat, &GSet::line(pins)))?;
        ensure!(ok(is_algebra_hom(cat, a, &target, &t.g))?, "{name}: g is not an algebra map");
    }
    Ok(())
}

fn classification_instances(cx: &Ctx) -> Outcome {
    let cat = &cx.cat;
    for n in 0..=3 {
        let whole = ok(schwartz_algebra::<Q>(cat, &GSet::line(n)))?;
        // C(R^n) is simple, so its only nonzero quotient is itself
        ensure!(ok(is_simple(cat, &cx.reg, &whole))?.verdict == Simplicity::Simple, "C(R^{n}) not simple");
        for s in ok(etale_subalgebras::<Q>(cat, &GSet::line(n)))? {
            let sub = ok(schwartz_algebra::<Q>(cat, &s.quotient))?;
            let etale = ok(is_etale(cat, &sub))?.etale;
            let simple = ok(is_simple(cat, &cx.reg, &sub))?.verdict == Simplicity::Simple;
            let m = s.quotient.max_arms()[0];
            ensure!(etale && simple && s.quotient == GSet::line(m), "subalgebra {} of C(R^{n})", s.quotient);
        }
    }
    for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let shape = OrbitShape::new(vec![a, b]);
        let subs = ok(etale_subalgebras::<Q>(cat, &GSet::transitive(shape.clone())))?;
        ensure!(subs.len() == 1 << (a + b), "R^{a} ⊠ R^{b}: {} subalgebras", subs.len());
        let found = sorted(subs.iter().map(|s| s.embedding.clone()).collect());
        ensure!(found == sorted(coordinate_pullbacks(cat, &shape)), "R^{a} ⊠ R^{b}: non-product subalgebra");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cat = Cat::new();
    let start = Instant::now();
    let reg = Registry::build(&cat, 4).expect("registry");
    let build = start.elapsed();
    let cx = Ctx { cat, reg };
    let criteria: Vec<(&str, Box<dyn Fn(&Ctx) -> Outcome>)> = vec![
        ("Delannoy Hom dimensions", Box::new(hom_dimensions)),
        ("decomposition table", Box::new(move |cx| decomposition_table(cx, build))),
        ("dimensions of simples", Box::new(dimensions)),
        ("restriction rule", Box::new(restriction_rule)),
        ("tensor rules", Box::new(tensor_rules)),
        ("duality", Box::new(duality)),
        ("E-idempotents and subalgebras", Box::new(e_idempotent_classification)),
        ("sub-étale counterexample", Box::new(sub_etale_counterexample)),
        ("étale positives", Box::new(etale_positives)),
        ("category laws", Box::new(category_laws)),
        ("split-group suite", Box::new(split_group)),
        ("restriction ideals and lengths", Box::new(proof_machinery)),
        ("adjunction transfer", Box::new(adjunction)),
        ("classification instances", Box::new(classification_instances)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| run(&cx))).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
