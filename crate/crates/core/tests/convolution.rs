use delannoy_core::measure::stabilizer_orbits;
use delannoy_core::ordcomb::{GMap, GSet, OrbitShape, transitive_homs};
use delannoy_core::permcat::{compose, compose_left_support, compose_right_support, hom_dim, Morphism};
use delannoy_core::{Cat, Field, Q};
use proptest::prelude::*;

fn delannoy_oracle(n: usize, m: usize) -> u128 {
    if n == 0 || m == 0 {
        return 1;
    }
    delannoy_oracle(n - 1, m) + delannoy_oracle(n, m - 1) + delannoy_oracle(n - 1, m - 1)
}

fn per_coordinate(shape: &OrbitShape, flat: &[i64]) -> Vec<Vec<Q>> {
    let off = shape.offsets();
    (0..shape.s()).map(|c| flat[off[c]..off[c + 1]].iter().map(|&v| Q::integer(v)).collect()).collect()
}

/// Convolution computed from the stabilizer-orbit decomposition with rational
/// points, independently of the placement engine.
fn convolve_by_stabilizers(cat: &Cat, psi: &Morphism<Q>, phi: &Morphism<Q>) -> Vec<Q> {
    let (z, y, x) = (&psi.target, &psi.source, &phi.source);
    let zx = cat.pair(z, x).unwrap();
    let zy = cat.pair(z, y).unwrap();
    let yx = cat.pair(y, x).unwrap();
    (0..zx.len())
        .map(|k| {
            let rep = zx.representative(k);
            let zp = per_coordinate(&z.orbits[rep[0].0], &rep[0].1);
            let xp = per_coordinate(&x.orbits[rep[1].0], &rep[1].1);
            let pins: Vec<Vec<Q>> = (0..z.s)
                .map(|c| {
                    let mut v: Vec<Q> = zp[c].iter().chain(&xp[c]).cloned().collect();
                    v.sort();
                    v.dedup();
                    v
                })
                .collect();
            let mut acc = Q::zero();
            for o in stabilizer_orbits(y, &pins).unwrap() {
                let yp = o.representative.clone();
                let i = zy.orbit_of_point(&[(rep[0].0, zp.clone()), (o.orbit, yp.clone())]).unwrap();
                let j = yx.orbit_of_point(&[(o.orbit, yp), (rep[1].0, xp.clone())]).unwrap();
                acc = acc.plus(&o.mass.times(&psi.coeffs[i]).times(&phi.coeffs[j]));
            }
            acc
        })
        .collect()
}

fn line(n: usize) -> GSet {
    GSet::line(n)
}

#[test]
fn hom_dimensions_are_delannoy_numbers() {
    for n in 0..=5 {
        for m in 0..=5 {
            assert_eq!(hom_dim(&line(n), &line(m)), delannoy_oracle(n, m), "n={n} m={m}");
        }
    }
}

#[test]
fn endomorphisms_of_the_line() {
    let cat = Cat::new();
    let x = line(1);
    let e = |v: [i64; 3]| Morphism::from_coeffs(&cat, &x, &x, v.iter().map(|&c| Q::integer(c)).collect()).unwrap();
    let (u, v, id) = (e([1, 0, 0]), e([0, 1, 0]), e([0, 0, 1]));
    assert_eq!(Morphism::identity(&cat, &x).unwrap(), id);
    assert_eq!(compose(&cat, &u, &u).unwrap(), u.scale(&Q::integer(-1)));
    assert_eq!(compose(&cat, &v, &v).unwrap(), v.scale(&Q::integer(-1)));
    let sum = u.add(&v).unwrap().add(&id).unwrap().scale(&Q::integer(-1));
    assert_eq!(compose(&cat, &u, &v).unwrap(), sum);
    assert_eq!(compose(&cat, &v, &u).unwrap(), sum);
}

#[test]
fn pushforward_after_pullback_is_minus_identity() {
    let cat = Cat::new();
    let f: GMap = transitive_homs(&OrbitShape::line(2), &OrbitShape::line(1)).unwrap().remove(0);
    let up = Morphism::<Q>::pullback(&cat, &f).unwrap();
    let down = Morphism::<Q>::pushforward(&cat, &f).unwrap();
    let id = Morphism::<Q>::identity(&cat, &line(1)).unwrap();
    assert_eq!(compose(&cat, &down, &up).unwrap(), id.scale(&Q::integer(-1)));
}

#[test]
fn pushforward_to_the_point_is_the_measure() {
    let cat = Cat::new();
    let f = GMap::terminal(&line(1));
    let eps = Morphism::<Q>::pushforward(&cat, &f).unwrap();
    let unit = Morphism::<Q>::pullback(&cat, &f).unwrap();
    assert_eq!(compose(&cat, &eps, &unit).unwrap().coeffs, vec![Q::integer(-1)]);
}

fn objects() -> Vec<GSet> {
    vec![
        GSet::point(1),
        line(1),
        line(2),
        GSet::new(1, vec![OrbitShape::line(1), OrbitShape::line(0)]).unwrap(),
        GSet::transitive(OrbitShape::new(vec![1, 1])),
        GSet::transitive(OrbitShape::new(vec![2, 0])),
    ]
}

fn random_morphism(cat: &Cat, src: &GSet, tgt: &GSet, seed: u64) -> Morphism<Q> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    Morphism::from_fn(cat, src, tgt, |_, _| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        Q::integer(((state >> 33) % 5) as i64 - 2)
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn composition_matches_stabilizer_oracle(a in 0usize..6, b in 0usize..6, c in 0usize..6, seed in any::<u64>()) {
        let objs = objects();
        let (x, y, z) = (&objs[a], &objs[b], &objs[c]);
        prop_assume!(x.s == y.s && y.s == z.s);
        let cat = Cat::new();
        let phi = random_morphism(&cat, x, y, seed);
        let psi = random_morphism(&cat, y, z, seed ^ 0x9e37);
        let got = compose(&cat, &psi, &phi).unwrap();
        prop_assert_eq!(got.coeffs, convolve_by_stabilizers(&cat, &psi, &phi));
    }

    #[test]
    fn streaming_routes_agree_with_the_table(a in 0usize..6, b in 0usize..6, c in 0usize..6, seed in any::<u64>()) {
        let objs = objects();
        let (x, y, z) = (&objs[a], &objs[b], &objs[c]);
        prop_assume!(x.s == y.s && y.s == z.s);
        let cat = Cat::new();
        let phi = random_morphism(&cat, x, y, seed);
        let psi = random_morphism(&cat, y, z, seed.rotate_left(7));
        let table = compose(&cat, &psi, &phi).unwrap();
        let left = compose_left_support(&cat, &psi.support_entries(&cat).unwrap(), &phi.kernel(&cat).unwrap(), z).unwrap();
        let right = compose_right_support(&cat, &psi.kernel(&cat).unwrap(), &phi.support_entries(&cat).unwrap(), x).unwrap();
        prop_assert_eq!(&left, &table);
        prop_assert_eq!(&right, &table);
    }
}
