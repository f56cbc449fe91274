use std::collections::{BTreeMap, HashMap, HashSet};

use mobile_atlas::mobile::*;
use mobile_atlas::models::{solve, ModelSpec};
use mobile_atlas::planar_map::BlockMode;
use mobile_atlas::series::{AuxPoly, Var};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly(s: &str) -> AuxPoly {
    AuxPoly::parse(s).unwrap()
}

fn values(pairs: &[(&str, i64)]) -> BTreeMap<String, BigRational> {
    pairs.iter().map(|&(k, v)| (k.to_string(), BigRational::from_integer(BigInt::from(v)))).collect()
}

fn specs() -> Vec<(ModelSpec, usize)> {
    let faces: Vec<(usize, AuxPoly)> = (1..=3).map(|k| (k, AuxPoly::var(&format!("a{k}")))).collect();
    vec![
        (ModelSpec::quadrangulation(poly("y")).with_mode(BlockMode::Pairs), 6),
        (ModelSpec::quadrangulation(poly("y")), 5),
        (ModelSpec::hp_triangulation(), 4),
        (ModelSpec::ising(), 4),
        (ModelSpec::new(&faces, &faces, poly("y")), 4),
    ]
}

#[test]
fn enumeration_has_no_duplicates() {
    for (spec, n) in specs() {
        let ms = enumerate_mobiles(&spec, n);
        let codes: HashSet<Vec<i64>> = ms.iter().map(canonical_code).collect();
        assert_eq!(codes.len(), ms.len());
    }
}

#[test]
fn json_round_trip() {
    for (spec, n) in specs() {
        for m in enumerate_mobiles(&spec, n) {
            let s = serde_json::to_string(&MobileJson::from_mobile(&m)).unwrap();
            let back = MobileJson::parse(&s).unwrap();
            assert_eq!(canonical_code(&back), canonical_code(&m), "{s}");
            assert!(check_local(&back).is_ok());
        }
    }
}

#[test]
fn json_shape() {
    let spec = ModelSpec::quadrangulation(poly("y")).with_mode(BlockMode::Pairs);
    let m = enumerate_mobiles(&spec, 3).into_iter().find(|m| m.edge_count() > 0).unwrap();
    let v = serde_json::to_value(MobileJson::from_mobile(&m)).unwrap();
    assert_eq!(v["tree"]["kind"], "labeled");
    assert_eq!(v["tree"]["label"], 0);
    assert_eq!(v["tree"]["children"][0]["edge"], "iii");
    assert_eq!(v["tree"]["children"][0]["node"]["kind"], "white");
    assert!(MobileJson::parse(r#"{"tree":{"kind":"labeled"}}"#).is_err());
    assert!(MobileJson::parse(r#"{"tree":{"kind":"black","children":[{"edge":"iii","node":{"kind":"labeled","label":1}}]}}"#).is_err());
}

#[test]
fn unrooted_codes_ignore_node_order() {
    let spec = ModelSpec::quadrangulation(poly("y"));
    for m in enumerate_mobiles(&spec, 4) {
        let mut u = m.clone();
        u.set_root(None);
        let j = MobileJson::from_mobile(&u).to_mobile().unwrap();
        assert_eq!(canonical_code(&j), canonical_code(&u));
    }
}

#[test]
fn encode_after_decode_is_identity() {
    let mut checked = 0;
    for (spec, n) in specs() {
        for m in enumerate_mobiles(&spec, n) {
            if m.edge_count() == 0 {
                continue;
            }
            let mut u = m.clone();
            u.set_root(None);
            normalize_labels(&mut u);
            // particles live on the faces, not in the blocked configuration
            for x in 0..u.node_count() {
                u.set_particles(x, 0);
            }
            let cfg = from_mobile_with_mode(&u, spec.mode).unwrap();
            let back = to_mobile(&cfg).unwrap();
            assert_eq!(canonical_code(&back), canonical_code(&u));
            checked += 1;
        }
    }
    assert!(checked > 700, "{checked}");
}

#[test]
fn sampling_is_deterministic() {
    let b = solve(&ModelSpec::quadrangulation(poly("y")), 6).unwrap();
    let v = values(&[("y", 1)]);
    let (m1, c1) = sample_mobile(&b, 6, &v, 7).unwrap();
    let (m2, c2) = sample_mobile(&b, 6, &v, 7).unwrap();
    assert_eq!(canonical_code(&m1), canonical_code(&m2));
    assert_eq!(c1.blocked_flags(), c2.blocked_flags());
    assert_eq!(c1.map().edge_count(), 24);
    let differs = (8..20).any(|s| canonical_code(&sample_mobile(&b, 6, &v, s).unwrap().0) != canonical_code(&m1));
    assert!(differs);
}

#[test]
fn sampled_maps_have_the_requested_size() {
    // triangles weighted by g, bigons free
    let spec = ModelSpec::new(&[(3, poly("g"))], &[(3, poly("g")), (2, poly("1"))], poly("y"));
    let b = solve(&spec, 8).unwrap();
    for seed in 0..10 {
        let (m, cfg) = sample_mobile(&b, 8, &values(&[("y", 2)]), seed).unwrap();
        assert!(check_well_labeled(&m).is_ok());
        assert_eq!(
            m.nodes().iter().filter(|n| matches!(n, Node::White)).count() + m.nodes().iter().filter(|n| matches!(n, Node::Black)).count(),
            cfg.map().face_count()
        );
        let triangles = (0..cfg.map().face_count()).filter(|&f| cfg.map().face_valence(f) == 3).count();
        assert_eq!(triangles, 8);
    }
}

#[test]
fn sampler_refusals() {
    let b = solve(&ModelSpec::quadrangulation(poly("y")), 3).unwrap();
    assert!(matches!(sample_mobile(&b, 4, &values(&[("y", 1)]), 0), Err(MobileError::OrderTooLow(3))));
    assert!(matches!(sample_mobile(&b, 2, &values(&[]), 0), Err(MobileError::Sampling(_))));
    // negative weights
    assert!(matches!(sample_mobile(&b, 2, &values(&[("y", -1)]), 0), Err(MobileError::Sampling(_))));
    let ising = solve(&ModelSpec::ising(), 3).unwrap();
    assert!(matches!(sample_mobile(&ising, 2, &values(&[("z1", 1)]), 0), Err(MobileError::Sampling(_))));
}

/// Upper quantile of the chi-square law (Wilson-Hilferty), at about 1e-4.
fn chi2_bound(df: usize) -> f64 {
    let k = df as f64;
    let z = 3.72;
    k * (1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt()).powi(3)
}

/// Draws rooted mobiles of grade `n` and compares frequencies with the exact weights of
/// the enumerated ones.
fn chi_square(spec: &ModelSpec, n: usize, max_nodes: usize, vals: &[(&str, i64)], draws: usize) -> (f64, usize) {
    let b = solve(spec, n).unwrap();
    let v = values(vals);
    let g = Var::new("g");
    let mut expected: HashMap<Vec<i64>, f64> = HashMap::new();
    let mut total = BigRational::zero();
    for m in enumerate_mobiles(spec, max_nodes) {
        let Some(w) = mobile_weight(spec, &m) else { continue };
        if w.is_zero() || w.degree_in(g) as usize != n {
            continue;
        }
        let mut w = w.substitute_value(g, &BigRational::from_integer(1.into()));
        for (k, x) in &v {
            w = w.substitute_value(Var::new(k), x);
        }
        let w = w.as_constant().unwrap();
        total += &w;
        *expected.entry(canonical_code(&m)).or_default() += w.to_f64().unwrap();
    }
    let sampler = Sampler::new(&b, n, &v).unwrap();
    assert_eq!(sampler.total(n), total);
    let t = total.to_f64().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    for _ in 0..draws {
        let m = sampler.sample(n, &mut rng).unwrap();
        let code = canonical_code(&m);
        assert!(expected.contains_key(&code), "sampled an object outside the class");
        *seen.entry(code).or_default() += 1;
    }
    let stat = expected
        .iter()
        .map(|(c, w)| {
            let e = draws as f64 * w / t;
            let o = *seen.get(c).unwrap_or(&0) as f64;
            (o - e).powi(2) / e
        })
        .sum();
    (stat, expected.len() - 1)
}

#[test]
fn forest_size_one_is_uniform() {
    let spec = ModelSpec::quadrangulation(poly("y")).with_mode(BlockMode::Pairs);
    let (stat, df) = chi_square(&spec, 1, 3, &[("y", 1)], 3000);
    assert_eq!(df, 2);
    assert!(stat < chi2_bound(df), "{stat}");
}

#[test]
fn weighted_sampling_matches_exact_law() {
    let spec = ModelSpec::quadrangulation(poly("y")).with_mode(BlockMode::Pairs);
    let (stat, df) = chi_square(&spec, 2, 6, &[("y", 2)], 20000);
    assert!(stat < chi2_bound(df), "{stat} on {df}");
    let (stat, df) = chi_square(&ModelSpec::quadrangulation(poly("y")), 2, 6, &[("y", 1)], 20000);
    assert!(stat < chi2_bound(df), "{stat} on {df}");
    let faces: Vec<(usize, AuxPoly)> = vec![(1, poly("g")), (2, poly("2*g")), (3, poly("g"))];
    let (stat, df) = chi_square(&ModelSpec::new(&faces, &faces, poly("y")), 3, 3, &[("y", 3)], 20000);
    assert!(stat < chi2_bound(df), "{stat} on {df}");
}
