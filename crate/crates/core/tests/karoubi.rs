use std::collections::BTreeMap;
use std::sync::OnceLock;

use delannoy_core::karoubi::*;
use delannoy_core::ordcomb::GSet;
use delannoy_core::permcat::{compose, Morphism};
use delannoy_core::{Cat, Error, Field, Q};
use proptest::prelude::*;

fn registry() -> &'static Registry<Q> {
    static REG: OnceLock<Registry<Q>> = OnceLock::new();
    REG.get_or_init(|| Registry::build(&Cat::new(), 3).expect("registry"))
}

fn lab(s: &str) -> SimpleLabel {
    SimpleLabel::new(s).unwrap()
}

fn tup(parts: &[&str]) -> LabelTuple {
    LabelTuple(parts.iter().map(|s| lab(s)).collect())
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

/// Every word over {a, b} of length `n`, built by string doubling.
fn words(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..n {
        out = out.iter().flat_map(|w| [format!("{w}a"), format!("{w}b")]).collect();
    }
    out
}

/// Cuts `w = uv` give `(u, v)`; deleting letter `i` gives `(w[..i], w[i+1..])`.
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

#[test]
fn labels_parse_and_dualize() {
    assert_eq!(lab("∅"), SimpleLabel::empty());
    assert_eq!(lab("1"), SimpleLabel::empty());
    assert_eq!(lab("abb").dual(), lab("baa"));
    assert!(SimpleLabel::new("abc").is_err());
    assert_eq!("a⊠∅".parse::<LabelTuple>().unwrap(), tup(&["a", ""]));
    assert_eq!(SimpleLabel::up_to(3).len(), 15);
}

#[test]
fn registry_holds_every_word_once() {
    let reg = registry();
    let have: Vec<String> = reg.labels().map(|l| l.word().to_string()).collect();
    let mut want: Vec<String> = (0..=3).flat_map(words).collect();
    want.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    assert_eq!(have, want);
}

#[test]
fn simple_dimensions_alternate_in_sign() {
    let cat = Cat::new();
    for l in registry().labels() {
        let want = if l.len() % 2 == 0 { Q::one() } else { Q::one().negate() };
        assert_eq!(registry().object(l).unwrap().dim(&cat).unwrap(), want, "{l}");
    }
}

#[test]
fn schwartz_spaces_decompose_binomially() {
    let cat = Cat::new();
    for n in 0..=3 {
        let d = decompose(&cat, registry(), &KObject::whole(&cat, &GSet::line(n)).unwrap()).unwrap();
        let mut want = BTreeMap::new();
        for l in 0..=n {
            for w in words(l) {
                want.insert(tup(&[&w]), binomial_oracle(n, l));
            }
        }
        assert_eq!(d.parts, want, "C(R^{n})");
        assert_eq!(d.end_dim as u128, delannoy_core::ordcomb::delannoy(n, n));
    }
}

#[test]
fn the_first_idempotents_follow_the_tie_break() {
    let reg = registry();
    let q = |v: i64| Q::integer(v);
    assert_eq!(reg.idempotent(&lab("a")).unwrap().coeffs, vec![q(0), q(1), q(1)]);
    assert_eq!(reg.idempotent(&lab("b")).unwrap().coeffs, vec![q(1), q(0), q(1)]);
}

#[test]
fn restriction_follows_cuts_and_deletions() {
    let cat = Cat::new();
    for n in 0..=3 {
        for w in words(n) {
            let r = verify_restriction_rule(&cat, registry(), &lab(&w)).unwrap();
            assert_eq!(r.observed, restriction_oracle(&w), "Res L_{w}");
            assert!(r.holds);
        }
    }
    let ab = verify_restriction_rule(&cat, registry(), &lab("ab")).unwrap().observed;
    let table: BTreeMap<LabelTuple, usize> =
        [tup(&["", "ab"]), tup(&["a", "b"]), tup(&["ab", ""]), tup(&["", "b"]), tup(&["a", ""])]
            .into_iter()
            .map(|t| (t, 1))
            .collect();
    assert_eq!(ab, table);
}

#[test]
fn tensor_products_of_letters() {
    let cat = Cat::new();
    let reg = registry();
    let parts = |l: &str, r: &str| tensor_decompose(&cat, reg, &lab(l), &lab(r)).unwrap().simple_parts();
    let m = |xs: &[(&str, usize)]| xs.iter().map(|(w, k)| (lab(w), *k)).collect::<BTreeMap<_, _>>();
    assert_eq!(parts("a", "a"), m(&[("a", 1), ("aa", 2)]));
    assert_eq!(parts("b", "b"), m(&[("b", 1), ("bb", 2)]));
    assert_eq!(parts("a", "b"), m(&[("", 1), ("a", 1), ("b", 1), ("ab", 1), ("ba", 1)]));
    assert_eq!(parts("", "ab"), m(&[("ab", 1)]));
}

#[test]
fn duals_swap_letters_and_only_the_unit_is_self_dual() {
    let cat = Cat::new();
    let reg = registry();
    for w in ["", "a", "b", "ab", "ba", "aa", "bb"] {
        let r = dual_label_check(&cat, reg, &lab(w), 2).unwrap();
        let swapped: String = w.chars().map(|c| if c == 'a' { 'b' } else { 'a' }).collect();
        assert_eq!(r.partners, vec![lab(&swapped)], "dual of {w}");
        assert!(r.holds);
    }
    for n in 0..=3 {
        for w in words(n) {
            assert_eq!(is_self_dual(&cat, reg, &lab(&w)).unwrap(), n == 0, "{w}");
        }
    }
}

#[test]
fn hom_dimensions_between_simples_and_schwartz_spaces() {
    let cat = Cat::new();
    let reg = registry();
    let (la, lb) = (reg.object(&lab("a")).unwrap(), reg.object(&lab("b")).unwrap());
    let c2 = KObject::whole(&cat, &GSet::line(2)).unwrap();
    assert_eq!(khom_dim(&cat, &la, &c2).unwrap(), 2);
    assert_eq!(khom_dim(&cat, &c2, &lb).unwrap(), 2);
    assert!(is_iso(&cat, &la, &la).unwrap());
    assert!(!is_iso(&cat, &la, &lb).unwrap());
    assert_eq!(kend_dim(&cat, &c2).unwrap(), 13);
}

#[test]
fn splittings_are_dual_bases() {
    let cat = Cat::new();
    let reg = registry();
    let c2 = KObject::whole(&cat, &GSet::line(2)).unwrap();
    for w in ["a", "ab"] {
        let s = reg.object(&lab(w)).unwrap();
        let maps = splitting_maps(&cat, &s, &c2).unwrap();
        assert_eq!(maps.len(), binomial_oracle(2, w.len()));
        for (i, p) in maps.iter().enumerate() {
            for (j, q) in maps.iter().enumerate() {
                let c = compose(&cat, &p.projection, &q.inclusion).unwrap();
                let want = if i == j { s.idem.clone() } else { Morphism::zero(&cat, &s.ambient, &s.ambient).unwrap() };
                assert_eq!(c, want);
            }
        }
        let proj = isotypic_projector(&cat, &s, &c2).unwrap();
        assert_eq!(compose(&cat, &proj, &proj).unwrap(), proj);
    }
}

#[test]
fn sums_of_idempotents_decompose_into_their_parts() {
    let cat = Cat::new();
    let reg = registry();
    let e = reg.idempotent(&lab("a")).unwrap().add(reg.idempotent(&lab("b")).unwrap()).unwrap();
    let m = KObject::new(&cat, e).unwrap();
    let d = decompose(&cat, reg, &m).unwrap();
    assert_eq!(d.simple_parts(), [(lab("a"), 1), (lab("b"), 1)].into_iter().collect());
}

#[test]
fn decomposition_reports_missing_labels() {
    let cat = Cat::new();
    let small = Registry::<Q>::build(&cat, 1).unwrap();
    let err = decompose(&cat, &small, &KObject::whole(&cat, &GSet::line(2)).unwrap()).unwrap_err();
    assert!(matches!(err, Error::MissingLabel(_)), "{err:?}");
}

#[test]
fn restricted_simples_have_invariants_only_up_to_length_one() {
    let cat = Cat::new();
    let reg = registry();
    let unit = KObject::<Q>::unit(&cat, 2).unwrap();
    for n in 0..=3 {
        for w in words(n) {
            let res = restrict(&cat, &reg.object(&lab(&w)).unwrap(), 0).unwrap();
            assert_eq!(khom_dim(&cat, &unit, &res).unwrap(), usize::from(n <= 1), "{w}");
        }
    }
}

fn morphism(cat: &Cat, x: &GSet, y: &GSet, seed: &[i64]) -> Morphism<Q> {
    let n = cat.pair(y, x).unwrap().len();
    Morphism::from_coeffs(cat, x, y, (0..n).map(|k| Q::integer(seed[k % seed.len()])).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn restriction_is_a_functor(
        a in prop::collection::vec(-3i64..4, 1..9),
        b in prop::collection::vec(-3i64..4, 1..9),
        dims in (0usize..3, 0usize..3, 0usize..3),
        pins in 1usize..3,
    ) {
        let cat = Cat::new();
        let (x, y, z) = (GSet::line(dims.0), GSet::line(dims.1), GSet::line(dims.2));
        let f = morphism(&cat, &x, &y, &a);
        let g = morphism(&cat, &y, &z, &b);
        let (rx, ry, rz) = (
            Restriction::new(&x, 0, pins).unwrap(),
            Restriction::new(&y, 0, pins).unwrap(),
            Restriction::new(&z, 0, pins).unwrap(),
        );
        let whole = restrict_morphism(&cat, &compose(&cat, &g, &f).unwrap(), &rx, &rz).unwrap();
        let parts = compose(
            &cat,
            &restrict_morphism(&cat, &g, &ry, &rz).unwrap(),
            &restrict_morphism(&cat, &f, &rx, &ry).unwrap(),
        ).unwrap();
        prop_assert_eq!(whole, parts);
    }
}
