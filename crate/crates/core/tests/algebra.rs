use std::sync::OnceLock;

use delannoy_core::algcls::*;
use delannoy_core::karoubi::{decompose, KObject, LabelTuple, Registry, Restriction, SimpleLabel};
use delannoy_core::ordcomb::{equivalence_relations, projection, GMap, GSet, OrbitShape};
use delannoy_core::permcat::{compose, Morphism};
use delannoy_core::{Cat, Error, Field, Q};

fn registry() -> &'static Registry<Q> {
    static REG: OnceLock<Registry<Q>> = OnceLock::new();
    REG.get_or_init(|| Registry::build(&Cat::new(), 3).expect("registry"))
}

fn sign(n: usize) -> Q {
    if n % 2 == 0 { Q::one() } else { Q::one().negate() }
}

fn lab(s: &str) -> SimpleLabel {
    SimpleLabel::new(s).unwrap()
}

#[test]
fn schwartz_algebras_satisfy_the_axioms() {
    let cat = Cat::new();
    let sets = [
        GSet::point(1),
        GSet::line(1),
        GSet::line(2),
        GSet::line(1).dsum(&GSet::point(1)).unwrap(),
        GSet::transitive(OrbitShape::new(vec![1, 1])),
    ];
    for x in &sets {
        let a = schwartz_algebra::<Q>(&cat, x).unwrap();
        assert!(check_axioms(&cat, &a).unwrap().holds(), "{x}");
    }
}

#[test]
fn the_trace_map_integrates() {
    let cat = Cat::new();
    for n in 0..=2 {
        let x = GSet::line(n);
        let a = schwartz_algebra::<Q>(&cat, &x).unwrap();
        // multiplication by f has trace ∫ f, so ε is the pushforward to a point
        let integral = Morphism::pushforward(&cat, &GMap::terminal(&x)).unwrap();
        assert_eq!(trace_map(&cat, &a).unwrap(), integral);
    }
}

#[test]
fn schwartz_algebras_of_lines_are_etale() {
    let cat = Cat::new();
    for n in 0..=3 {
        let a = schwartz_algebra::<Q>(&cat, &GSet::line(n)).unwrap();
        let r = is_etale(&cat, &a).unwrap();
        assert!(r.etale, "C(R^{n})");
        assert_eq!(r.unit_trace, sign(n));
        assert_eq!(r.radical_dim, 0);
        assert!(r.witness.is_none());
        let (_, phi) = trace_form(&cat, &a).unwrap();
        let psi = r.inverse.unwrap();
        assert_eq!(compose(&cat, &psi, &phi).unwrap(), Morphism::identity(&cat, &GSet::line(n)).unwrap());
    }
}

#[test]
fn invariants_of_transitive_algebras_form_a_field() {
    let cat = Cat::new();
    for n in 0..=2 {
        let g = gamma(&cat, &schwartz_algebra::<Q>(&cat, &GSet::line(n)).unwrap()).unwrap();
        assert_eq!(g.dim(), 1);
        assert!(gamma_is_field(&g).unwrap());
    }
    let two = GSet::line(1).dsum(&GSet::point(1)).unwrap();
    let g = gamma(&cat, &schwartz_algebra::<Q>(&cat, &two).unwrap()).unwrap();
    assert_eq!(g.dim(), 2);
    assert!(!gamma_is_field(&g).unwrap());
    assert_eq!(g.primitive_idempotents().unwrap().len(), 2);
}

#[test]
fn the_sub_etale_example() {
    let cat = Cat::new();
    let reg = registry();
    let a = subetale_example(&cat, reg).unwrap();
    assert!(check_axioms(&cat, &a).unwrap().holds());
    let parts = decompose(&cat, reg, &a.carrier).unwrap().simple_parts();
    assert_eq!(parts, [(lab(""), 1), (lab("a"), 1)].into_iter().collect());
    let g = gamma(&cat, &a).unwrap();
    assert_eq!(g.dim(), 1);
    assert!(gamma_is_field(&g).unwrap());
    let r = is_etale(&cat, &a).unwrap();
    assert!(!r.etale);
    // dim A = dim L_a + dim 1 = 0
    assert_eq!(r.unit_trace, Q::zero());
    let (_, phi) = trace_form(&cat, &a).unwrap();
    let h = r.witness.expect("witness");
    assert!(!h.is_zero());
    assert!(compose(&cat, &phi, &h).unwrap().is_zero());
    assert_eq!(compose(&cat, &a.carrier.idem, &h).unwrap(), h);
}

#[test]
fn the_sub_etale_example_has_the_letter_as_an_ideal() {
    let cat = Cat::new();
    let reg = registry();
    let a = subetale_example(&cat, reg).unwrap();
    let r = is_simple(&cat, reg, &a).unwrap();
    assert_eq!(r.verdict, Simplicity::NotSimple);
    let la = LabelTuple::single(lab("a"));
    assert_eq!(r.ideals[&la], vec![la.clone()]);
    // C(R) itself has no proper ideal
    let b = schwartz_algebra::<Q>(&cat, &GSet::line(1)).unwrap();
    assert_eq!(is_simple(&cat, reg, &b).unwrap().verdict, Simplicity::Simple);
    let b2 = schwartz_algebra::<Q>(&cat, &GSet::line(2)).unwrap();
    assert_eq!(is_simple(&cat, reg, &b2).unwrap().verdict, Simplicity::Simple);
    let two = schwartz_algebra::<Q>(&cat, &GSet::line(1).dsum(&GSet::point(1)).unwrap()).unwrap();
    assert_eq!(is_simple(&cat, reg, &two).unwrap().verdict, Simplicity::NotSimple);
}

#[test]
fn frobenius_forms() {
    let cat = Cat::new();
    let b = schwartz_algebra::<Q>(&cat, &GSet::line(1)).unwrap();
    let eps = trace_map(&cat, &b).unwrap();
    assert!(frobenius_check(&cat, &b, &eps).unwrap());
    assert!(!frobenius_check(&cat, &b, &Morphism::zero(&cat, &GSet::line(1), &GSet::point(1)).unwrap()).unwrap());
    let a = subetale_example(&cat, registry()).unwrap();
    let lam = compose(&cat, &eps, &a.carrier.idem).unwrap();
    assert!(!frobenius_check(&cat, &a, &lam).unwrap());
}

#[test]
fn relative_tensor_exactness_separates_the_examples() {
    let cat = Cat::new();
    let b = schwartz_algebra::<Q>(&cat, &GSet::line(1)).unwrap();
    let one = schwartz_algebra::<Q>(&cat, &GSet::point(1)).unwrap();
    assert!(relative_tensor_exactness(&cat, &one, &b, &b.unit).unwrap().exact);
    assert!(relative_tensor_exactness(&cat, &b, &b, &Morphism::identity(&cat, &GSet::line(1)).unwrap()).unwrap().exact);
    let a = subetale_example(&cat, registry()).unwrap();
    let r = relative_tensor_exactness(&cat, &a, &b, &a.carrier.idem).unwrap();
    assert!(!r.exact);
    assert!(r.equalizer_dim > r.image_dim);
    let not_hom = Morphism::zero(&cat, &GSet::line(1), &GSet::line(1)).unwrap();
    assert!(matches!(relative_tensor_exactness(&cat, &b, &b, &not_hom), Err(Error::Precondition(_))));
}

#[test]
fn e_idempotents_are_equivalence_relations() {
    let cat = Cat::new();
    for n in 0..=3 {
        let x = GSet::line(n);
        let e = e_idempotents::<Q>(&cat, &x).unwrap();
        assert_eq!(e.len(), 1 << n);
        let rels: Vec<_> = e.iter().map(|i| i.relation.clone()).collect();
        assert_eq!(rels, equivalence_relations(&cat, &x).unwrap());
    }
}

#[test]
fn etale_subalgebras_are_coordinate_pullbacks() {
    let cat = Cat::new();
    for n in 0..=2 {
        let x = GSet::line(n);
        let b = schwartz_algebra::<Q>(&cat, &x).unwrap();
        let subs = etale_subalgebras::<Q>(&cat, &x).unwrap();
        let mut found: Vec<Morphism<Q>> = subs.iter().map(|s| s.embedding.clone()).collect();
        for s in &subs {
            assert!(s.quotient.is_transitive());
            let a = schwartz_algebra::<Q>(&cat, &s.quotient).unwrap();
            assert!(is_algebra_hom(&cat, &a, &b, &s.embedding).unwrap());
        }
        let mut want = Vec::new();
        for mask in 0..1usize << n {
            let keep: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let p = projection(&OrbitShape::line(n), &[keep]).unwrap();
            want.push(Morphism::<Q>::pullback(&cat, &p).unwrap());
        }
        let key = |m: &Morphism<Q>| format!("{:?}", m);
        found.sort_by_key(key);
        want.sort_by_key(key);
        assert_eq!(found, want, "n = {n}");
    }
}

#[test]
fn etale_subalgebras_over_two_coordinates_are_products() {
    let cat = Cat::new();
    let x = GSet::transitive(OrbitShape::new(vec![1, 1]));
    let subs = etale_subalgebras::<Q>(&cat, &x).unwrap();
    assert_eq!(subs.len(), 4);
    for s in subs {
        assert!(s.quotient.is_transitive());
        assert!(s.quotient.orbits[0].arms.iter().all(|&a| a <= 1));
    }
}

#[test]
fn restricted_lines_split_off_two_ideals() {
    let cat = Cat::new();
    for n in 1..=3 {
        let r = restriction_ideals(&cat, registry(), n).unwrap();
        assert!(r.is_case_a(), "n = {n}");
        // the ideals live on the orbits with everything left or right of the pin
        let all_right = r.orbits.iter().position(|o| o.arms == vec![0, n]).unwrap();
        let all_left = r.orbits.iter().position(|o| o.arms == vec![n, 0]).unwrap();
        assert_eq!(r.right_orbits, vec![all_right]);
        assert_eq!(r.left_orbits, vec![all_left]);
    }
    let r = restriction_ideals(&cat, registry(), 1).unwrap();
    assert_eq!(r.quotient, GSet::point(2));
}

#[test]
fn length_statistics() {
    let cat = Cat::new();
    let c2 = KObject::whole(&cat, &GSet::line(2)).unwrap();
    let s = length_stats(&cat, registry(), &c2).unwrap();
    assert_eq!((s.total, s.top_length), (2, 4));
    let res = delannoy_core::karoubi::restrict(&cat, &c2, 0).unwrap();
    let s = length_stats(&cat, registry(), &res).unwrap();
    assert_eq!(s.per_coord, vec![2, 2]);
    assert_eq!(s.total, 2);
}

#[test]
fn invariant_components_drop_a_coordinate() {
    let cat = Cat::new();
    let r = Restriction::new(&GSet::line(1), 0, 1).unwrap();
    let a = invariant_component::<Q>(&cat, &r.set, 0).unwrap();
    let mut arms: Vec<Vec<usize>> = a.ambient().orbits.iter().map(|o| o.arms.clone()).collect();
    arms.sort();
    assert_eq!(arms, vec![vec![0], vec![0], vec![1]]);
    assert!(is_etale(&cat, &a).unwrap().etale);
}

fn evaluation_at_pin(cat: &Cat, n: usize) -> Morphism<Q> {
    let r = Restriction::new(&GSet::line(n), 0, 1).unwrap();
    Morphism::from_fn(cat, &r.set, &GSet::point(2), |_, x| if r.origin(x.0).1.hits[0] { Q::one() } else { Q::zero() })
        .unwrap()
}

#[test]
fn adjunction_transfer_examples() {
    let cat = Cat::new();
    let line = schwartz_algebra::<Q>(&cat, &GSet::line(1)).unwrap();
    let t = adjunction_transfer(&cat, &line, 1, &evaluation_at_pin(&cat, 1)).unwrap();
    assert!(t.recovers_f && t.algebra_hom);
    assert_eq!(t.g, Morphism::identity(&cat, &GSet::line(1)).unwrap());

    let one = schwartz_algebra::<Q>(&cat, &GSet::point(1)).unwrap();
    let t = adjunction_transfer(&cat, &one, 1, &Morphism::identity(&cat, &GSet::point(2)).unwrap()).unwrap();
    assert!(t.recovers_f && t.algebra_hom);
    assert_eq!(t.g, line.unit);

    let plane = schwartz_algebra::<Q>(&cat, &GSet::line(2)).unwrap();
    let t = adjunction_transfer(&cat, &plane, 2, &evaluation_at_pins(&cat, 2).unwrap()).unwrap();
    assert!(t.recovers_f && t.algebra_hom);
    assert_eq!(t.g, Morphism::identity(&cat, &GSet::line(2)).unwrap());

}

#[test]
fn adjunction_transfer_rejects_non_homomorphisms() {
    let cat = Cat::new();
    let line = schwartz_algebra::<Q>(&cat, &GSet::line(1)).unwrap();
    let r = Restriction::new(&GSet::line(1), 0, 1).unwrap();
    let integral_left = Morphism::from_fn(&cat, &r.set, &GSet::point(2), |_, x| {
        if r.origin(x.0).1.counts[0] == 1 { Q::one() } else { Q::zero() }
    })
    .unwrap();
    let err = adjunction_transfer(&cat, &line, 1, &integral_left).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)), "{err:?}");
}

#[test]
fn subalgebras_must_be_closed() {
    let cat = Cat::new();
    let reg = registry();
    let b = schwartz_algebra::<Q>(&cat, &GSet::line(1)).unwrap();
    let ea = reg.idempotent(&lab("a")).unwrap();
    // L_a alone misses the unit
    assert!(matches!(subalgebra(&cat, &b, ea), Err(Error::Precondition(_))));
    let restricted = restrict_algebra(&cat, &b, 0, 1).unwrap().0;
    assert!(check_axioms(&cat, &restricted).unwrap().holds());
}
