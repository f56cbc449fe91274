use std::collections::BTreeMap;
use std::sync::OnceLock;

use mobile_atlas::mobile::{canonical_code, contour_word, from_mobile_with_mode, normalize_labels, sample_mobile, to_mobile, Mobile};
use mobile_atlas::models::{build_system, solve, Bundle, Grading, ModelSpec};
use mobile_atlas::planar_map::{bicolor_faces, canonical_form, distances, dual, validate_blocking, BlockMode, BlockedConfig, PlanarMap};
use mobile_atlas::series::{AuxPoly, GSeries, Monomial, Var};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn poly(s: &str) -> AuxPoly {
    AuxPoly::parse(s).unwrap()
}

fn bundles() -> &'static [(Bundle, BTreeMap<String, BigRational>)] {
    static B: OnceLock<Vec<(Bundle, BTreeMap<String, BigRational>)>> = OnceLock::new();
    B.get_or_init(|| {
        let one: BTreeMap<String, BigRational> = [("y".to_string(), BigRational::from_integer(BigInt::from(1)))].into();
        let mixed: Vec<(usize, AuxPoly)> = (1..=4).map(|k| (k, poly("g"))).collect();
        vec![
            (solve(&ModelSpec::quadrangulation(poly("y")), 5).unwrap(), one.clone()),
            (solve(&ModelSpec::quadrangulation(poly("y")).with_mode(BlockMode::Pairs), 5).unwrap(), one.clone()),
            (solve(&ModelSpec::new(&mixed, &mixed, poly("y")), 5).unwrap(), one),
        ]
    })
}

/// A random pointed Eulerian map with a valid blocking, drawn through its mobile.
fn sampled() -> impl Strategy<Value = (Mobile, BlockedConfig)> {
    (0..3usize, 2..=5usize, any::<u64>()).prop_map(|(i, n, seed)| {
        let (b, v) = &bundles()[i];
        sample_mobile(b, n, v, seed).unwrap()
    })
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    p[x] = r;
    r
}

fn small_poly() -> impl Strategy<Value = AuxPoly> {
    let term = (-3i64..=3, 0u32..=2, 0u32..=2, 0u32..=1).prop_map(|(c, a, b, d)| {
        let m = Monomial::from_pairs(&[(Var::new("g"), a), (Var::new("y"), b), (Var::new("z1"), d)]);
        AuxPoly::term(BigRational::from_integer(BigInt::from(c)), m)
    });
    prop::collection::vec(term, 0..4).prop_map(|ts| ts.iter().fold(AuxPoly::zero(), |acc, t| &acc + t))
}

fn small_series() -> impl Strategy<Value = GSeries> {
    prop::collection::vec(small_poly(), 4).prop_map(GSeries::from_coeffs)
}

fn random_spec() -> impl Strategy<Value = ModelSpec> {
    let weights = prop::collection::btree_map(1usize..=4, 1i64..=2, 1..3);
    (weights.clone(), weights, prop_oneof![Just("0"), Just("1"), Just("y")], any::<bool>()).prop_map(|(w, b, y, pairs)| {
        let to = |m: &BTreeMap<usize, i64>| m.iter().map(|(&k, &c)| (k, poly(&format!("{c}*g")))).collect::<Vec<_>>();
        // pair blockings live on bivalent black faces only
        let b = if pairs { vec![(2, poly("1"))] } else { to(&b) };
        let spec = ModelSpec::new(&to(&w), &b, poly(y)).with_grading(Grading::Faces);
        if pairs {
            spec.with_mode(BlockMode::Pairs)
        } else {
            spec
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn euler_relation_and_colouring((_, c) in sampled()) {
        let m = c.map();
        prop_assert_eq!(m.vertex_count() + m.face_count(), m.edge_count() + 2);
        prop_assert!(bicolor_faces(m).is_ok());
        prop_assert!(validate_blocking(&c).valid);
    }

    #[test]
    fn bicolouring_exactly_when_valences_are_even(sigma in (1usize..=4).prop_flat_map(|e| Just((0..2 * e as u32).collect::<Vec<_>>()).prop_shuffle())) {
        let Ok(m) = PlanarMap::from_sigma(sigma) else { return Ok(()) };
        let even = (0..m.vertex_count()).all(|v| m.vertex_darts(v).len() % 2 == 0);
        prop_assert_eq!(bicolor_faces(&m).is_ok(), even);
    }

    #[test]
    fn blocked_duals_are_acyclic((_, c) in sampled()) {
        let m = c.map();
        let mut p: Vec<usize> = (0..m.face_count()).collect();
        for e in c.blocked_edges() {
            let [a, b] = m.edge_darts(e);
            let (x, y) = (find(&mut p, m.face(a)), find(&mut p, m.face(b)));
            prop_assert_ne!(x, y);
            p[x] = y;
        }
    }

    #[test]
    fn distances_are_geodesic((_, c) in sampled()) {
        let m = c.map();
        let d = distances(&c).unwrap().dist;
        let allowed: Vec<usize> = (0..m.dart_count()).filter(|&x| c.is_forward(x) && !c.is_blocked(m.edge(x))).collect();
        for &x in &allowed {
            prop_assert!(d[m.head(x)] <= d[m.vertex(x)] + 1);
        }
        for v in (0..m.vertex_count()).filter(|&v| d[v] > 0) {
            prop_assert!(allowed.iter().any(|&x| m.head(x) == v && d[m.vertex(x)] + 1 == d[v]));
        }
    }

    #[test]
    fn dual_is_an_involution((_, c) in sampled()) {
        let m = c.map();
        prop_assert_eq!(canonical_form(&dual(&dual(m)), 0), canonical_form(m, 0));
    }

    #[test]
    fn mobile_counts_and_labels((_, c) in sampled()) {
        let m = c.map();
        let mob = to_mobile(&c).unwrap();
        prop_assert_eq!(mob.node_count(), m.face_count() + m.vertex_count() - 1);
        prop_assert_eq!(mob.edge_count(), m.edge_count());
        prop_assert_eq!(mob.marked_count(), c.blocked_count());
        let mut labels: Vec<i64> = mob.nodes().iter().filter_map(|n| n.label()).collect();
        let mut dist: Vec<i64> = distances(&c).unwrap().dist.iter().filter(|&&x| x > 0).map(|&x| x as i64).collect();
        labels.sort();
        dist.sort();
        prop_assert_eq!(labels, dist);
        prop_assert_eq!(contour_word(&mob).unwrap().ratchet_violation(), None);
    }

    #[test]
    fn bijection_both_ways((mob, c) in sampled()) {
        let again = to_mobile(&c).unwrap();
        let back = from_mobile_with_mode(&again, c.mode()).unwrap();
        prop_assert_eq!(back.canonical_key(), c.canonical_key());
        let mut u = mob.clone();
        u.set_root(None);
        normalize_labels(&mut u);
        prop_assert_eq!(canonical_code(&again), canonical_code(&u));
    }

    #[test]
    fn ring_axioms(a in small_series(), b in small_series(), c in small_series()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
    }

    #[test]
    fn polynomial_ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn solutions_verify_and_windows_are_sound(spec in random_spec()) {
        let order = 3;
        let sys = build_system(&spec, order).unwrap();
        let (sol, trace) = sys.solve_traced(order).unwrap();
        prop_assert!(sys.verify(&sol).is_ok());
        let mut wide = sys.clone();
        wide.widen_windows(2);
        let sol2 = wide.solve(order).unwrap();
        for name in sys.names() {
            prop_assert_eq!(sol.get(name), sol2.get(name));
        }
        // after sweep s every coefficient of grade at most s is final
        for (s, values) in trace.iter().enumerate() {
            for (i, name) in sys.names().iter().enumerate() {
                let (now, last) = (&values[i], sol.get(name));
                for n in 0..=s.min(order) {
                    let exps = now.terms().chain(last.terms()).map(|(e, _)| e).collect::<Vec<_>>();
                    for e in exps {
                        prop_assert_eq!(now.coeff(e).coefficient(n).clone(), last.coeff(e).coefficient(n).clone());
                    }
                }
            }
        }
    }
}
