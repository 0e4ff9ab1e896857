use delannoy_core::ordcomb::{GSet, OrbitShape};
use delannoy_core::permcat::laws::*;
use delannoy_core::permcat::{compose, hom_dim, Morphism};
use delannoy_core::{Cat, Fp, Q};
use proptest::prelude::*;

/// Integer coefficients from a small multiplicative hash of the index.
fn sample(cat: &Cat, x: &GSet, y: &GSet, salt: i64) -> Morphism<Q> {
    let n = hom_dim(x, y) as i64;
    let coeffs = (0..n).map(|k| Q::integer((k * 7 + salt * 13 + k * k * salt) % 9 - 4)).collect();
    Morphism::from_coeffs(cat, x, y, coeffs).unwrap()
}

/// Tuples of `k` line degrees summing to at most `total`.
fn degree_tuples(k: usize, total: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for d in 0..=total {
        for mut rest in degree_tuples(k - 1, total - d) {
            rest.insert(0, d);
            out.push(rest);
        }
    }
    out
}

#[test]
fn identities_are_units() {
    let cat = Cat::new();
    for d in degree_tuples(2, 4) {
        let f = sample(&cat, &GSet::line(d[0]), &GSet::line(d[1]), 1);
        assert!(unit_law(&cat, &f).unwrap(), "{d:?}");
    }
}

#[test]
fn composition_is_associative() {
    let cat = Cat::new();
    for d in degree_tuples(4, 4) {
        let x: Vec<GSet> = d.iter().map(|&n| GSet::line(n)).collect();
        let f = sample(&cat, &x[0], &x[1], 1);
        let g = sample(&cat, &x[1], &x[2], 2);
        let h = sample(&cat, &x[2], &x[3], 3);
        assert!(associativity(&cat, &h, &g, &f).unwrap(), "{d:?}");
    }
}

#[test]
fn tensor_and_composition_interchange() {
    let cat = Cat::new();
    for d in degree_tuples(6, 4) {
        let x: Vec<GSet> = d.iter().map(|&n| GSet::line(n)).collect();
        let c = sample(&cat, &x[0], &x[1], 1);
        let a = sample(&cat, &x[1], &x[2], 2);
        let d_ = sample(&cat, &x[3], &x[4], 3);
        let b = sample(&cat, &x[4], &x[5], 4);
        assert!(interchange(&cat, &a, &b, &c, &d_).unwrap(), "{d:?}");
    }
}

#[test]
fn zigzags_are_identities() {
    let cat = Cat::new();
    let sets = [
        GSet::point(1),
        GSet::line(1),
        GSet::line(2),
        GSet::line(1).dsum(&GSet::point(1)).unwrap(),
        GSet::transitive(OrbitShape::new(vec![1, 1])),
        GSet::transitive(OrbitShape::new(vec![2, 1])),
        GSet::transitive(OrbitShape::new(vec![2, 2])),
        GSet::line(3),
        GSet::line(4),
    ];
    for x in &sets {
        assert!(snake::<Q>(&cat, x).unwrap(), "{x}");
        assert!(snake::<Fp<10007>>(&cat, x).unwrap(), "{x} mod p");
    }
}

#[test]
fn composition_with_the_evaluation_pairing_is_the_transpose() {
    let cat = Cat::new();
    let x = GSet::line(2);
    let f = sample(&cat, &x, &x, 5);
    // ev ∘ (f ⊗ id) = ev ∘ (id ⊗ fᵀ)
    let ev = Morphism::<Q>::ev(&cat, &x).unwrap();
    let id = Morphism::identity(&cat, &x).unwrap();
    let left = compose(&cat, &ev, &f.tensor(&cat, &id).unwrap()).unwrap();
    let right = compose(&cat, &ev, &id.tensor(&cat, &f.transpose(&cat).unwrap()).unwrap()).unwrap();
    assert_eq!(left, right);
}

fn small_set() -> impl Strategy<Value = GSet> {
    let shape = prop_oneof![
        (0usize..3).prop_map(|n| OrbitShape::new(vec![n, 0])),
        (0usize..3).prop_map(|n| OrbitShape::new(vec![0, n])),
        Just(OrbitShape::new(vec![1, 1])),
    ];
    prop::collection::vec(shape, 1..3).prop_map(|o| GSet::new(2, o).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn laws_over_two_coordinates(x in small_set(), y in small_set(), z in small_set(), w in small_set(), salt in 0i64..50) {
        let cat = Cat::new();
        let degree = |s: &GSet| s.max_arms().iter().sum::<usize>();
        prop_assume!(degree(&x) + degree(&y) + degree(&z) + degree(&w) <= 6);
        let f = sample(&cat, &x, &y, salt);
        let g = sample(&cat, &y, &z, salt + 1);
        let h = sample(&cat, &z, &w, salt + 2);
        prop_assert!(unit_law(&cat, &f).unwrap());
        prop_assert!(associativity(&cat, &h, &g, &f).unwrap());
        prop_assert!(interchange(&cat, &g, &f, &f, &Morphism::identity(&cat, &x).unwrap()).unwrap());
    }
}
