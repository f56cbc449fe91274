//! End-to-end acceptance run: ten criteria, each with its own time budget, reported one
//! line apiece and run one after the other so the timings are not skewed.

use std::time::{Duration, Instant};

use mobile_atlas::models::forest::{arch_factorization_holds, forest, forest_coefficient, ternary_kernel};
use mobile_atlas::models::hp::triangulation_hp;
use mobile_atlas::models::ising::{ising, ising_rooted};
use mobile_atlas::models::maxblocked::{leaf_matching, random_balanced_tree};
use mobile_atlas::models::singularity::{forest_singularity, real, spanning_tree_singularity, Classification, Real};
use mobile_atlas::oracle::checks::*;
use mobile_atlas::par::Exec;
use mobile_atlas::planar_map::{validate_blocking, PlanarMap};
use mobile_atlas::series::{AuxPoly, GSeries};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn poly(s: &str) -> AuxPoly {
    AuxPoly::parse(s).unwrap()
}

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn series_matches(name: &str, s: &GSeries, expected: &[&str]) -> Result<(), String> {
    for (n, e) in expected.iter().enumerate() {
        let want = poly(e);
        expect(s.coefficient(n) == &want, || format!("{name} at g^{n}: got {} want {want}", s.coefficient(n)))?;
    }
    Ok(())
}

fn reports_ok(r: &[TaskReport]) -> Result<(), String> {
    match r.iter().find(|r| !r.matched) {
        Some(bad) => Err(format!("{}: expected {} got {}", bad.name, bad.expected, bad.actual)),
        None => Ok(()),
    }
}

fn c1_forest() -> Outcome {
    let f = forest(6).map_err(|e| e.to_string())?;
    series_matches(
        "R",
        &f.r,
        &[
            "1",
            "3",
            "6*(3+5*y)",
            "15*(9+30*y+28*y^2)",
            "18*(63+315*y+570*y^2+385*y^3)",
            "126*(81+540*y+1440*y^2+1855*y^3+1001*y^4)",
            "36*(2673+22275*y+78300*y^2+146970*y^3+149884*y^4+68068*y^5)",
        ],
    )?;
    Ok("R to g^6".into())
}

fn c2_hard_particles() -> Outcome {
    let b = triangulation_hp(12).map_err(|e| e.to_string())?;
    series_matches(
        "R",
        b.r(),
        &[
            "1",
            "0",
            "2*(1+2*z1)",
            "0",
            "4*(2+8*z1+5*z1^2)",
            "0",
            "4*(10+60*z1+89*z1^2+28*z1^3)",
            "0",
            "32*(7+56*z1+135*z1^2+107*z1^3+21*z1^4)",
            "0",
            "16*(84+840*z1+2828*z1^2+3808*z1^3+1911*z1^4+264*z1^5)",
            "0",
            "64*(132+1584*z1+6870*z1^2+13320*z1^3+11629*z1^4+4088*z1^5+429*z1^6)",
        ],
    )?;
    series_matches(
        "G",
        b.g(),
        &[
            "1",
            "0",
            "3*(1+2*z1)",
            "0",
            "12*(1+4*z1+2*z1^2)",
            "0",
            "15*(4+24*z1+33*z1^2+8*z1^3)",
            "0",
            "48*(7+56*z1+130*z1^2+92*z1^3+14*z1^4)",
            "0",
            "168*(12+120*z1+395*z1^2+500*z1^3+220*z1^4+24*z1^5)",
            "0",
            "144*(88+1056*z1+4512*z1^2+8416*z1^3+6801*z1^4+2080*z1^5+176*z1^6)",
        ],
    )?;
    Ok("R and G to g^12".into())
}

fn c3_ising() -> Outcome {
    let b = ising(6).map_err(|e| e.to_string())?;
    series_matches(
        "R",
        b.r(),
        &[
            "1",
            "6*z1^2",
            "3*(1+8*z1^2+15*z1^4)",
            "18*z1^2*(11+28*z1^2+21*z1^4)",
            "27*(1+31*z1^2+229*z1^4+285*z1^6+126*z1^8)",
            "54*z1^2*(97+907*z1^2+2521*z1^4+1929*z1^6+594*z1^8)",
            "81*(4+279*z1^2+4833*z1^4+19958*z1^6+30678*z1^8+16419*z1^10+3861*z1^12)",
        ],
    )?;
    series_matches(
        "G",
        b.g(),
        &[
            "1",
            "12*z1^2",
            "4*(1+12*z1^2+18*z1^4)",
            "180*z1^2*(2+5*z1^2+3*z1^4)",
            "18*(2+85*z1^2+624*z1^4+693*z1^6+252*z1^8)",
            "756*z1^2*(12+119*z1^2+312*z1^4+207*z1^6+54*z1^8)",
            "432*(1+91*z1^2+1642*z1^4+6681*z1^6+9450*z1^8+4356*z1^10+891*z1^12)",
        ],
    )?;
    // the rescaling fails with NonDivisible on any remainder
    let h = ising_rooted(b.g()).map_err(|e| e.to_string())?;
    series_matches(
        "H",
        &h,
        &[
            "0",
            "4*z1^2",
            "2*(1+8*z1^2+9*z1^4)",
            "108*z1^2*(1+2*z1^2+z1^4)",
            "12*(1+34*z1^2+208*z1^4+198*z1^6+63*z1^8)",
            "216*z1^2*(10+85*z1^2+195*z1^4+115*z1^6+27*z1^8)",
            "54*(2+156*z1^2+2463*z1^4+8908*z1^6+11340*z1^8+4752*z1^10+891*z1^12)",
        ],
    )?;
    Ok("R, G and H to g^6, rooted rescaling exact".into())
}

fn c4_identities() -> Outcome {
    let mut all = identity_reports(8);
    all.extend(duality_reports(8));
    if let Some(bad) = all.iter().find(|r| !r.holds) {
        return Err(format!("{} fails {}", bad.name, bad.detail.clone().unwrap_or_default()));
    }
    Ok(format!("{} identities to order 8", all.len()))
}

fn c5_kernel() -> Outcome {
    let q = ternary_kernel(5).map_err(|e| e.to_string())?;
    series_matches("q", &q, &["1", "1", "3", "12", "55", "273"])?;
    expect((1..=50).all(arch_factorization_holds), || "arch factorization".into())?;
    expect(forest_coefficient(3) == BigInt::from(420), || "forest coefficient at n = 3".into())?;
    Ok("q to x^5, factorization for n = 1..50".into())
}

fn c6_round_trip() -> Outcome {
    let s = roundtrip_suite(4, Exec::default()).map_err(|e| e.to_string())?;
    if let Some(f) = s.failures.first() {
        return Err(format!("{f:?}"));
    }
    expect(s.directed == 682 && s.pairs == 127, || format!("unexpected totals {} / {}", s.directed, s.pairs))?;
    Ok(format!("{} directed and {} pair configurations", s.directed, s.pairs))
}

fn c7_oracle_series() -> Outcome {
    let exec = Exec::default();
    let mut r = forest_reports(2, exec).map_err(|e| e.to_string())?;
    r.extend(hp_reports(4, exec).map_err(|e| e.to_string())?);
    r.extend(ising_reports(2, exec).map_err(|e| e.to_string())?);
    reports_ok(&r)?;
    Ok(format!("{} comparisons", r.len()))
}

fn c8_cancellation() -> Outcome {
    let exec = Exec::default();
    let s = exhaustive_cancellation(3, 1, exec).map_err(|e| e.to_string())?;
    if let Some(f) = s.failures.first() {
        return Err(format!("{f:?}"));
    }
    expect(s.violating_checked > 0, || "no violating configuration seen".into())?;
    let found = find_cancellation_instance(4, 12, 5, exec).map_err(|e| e.to_string())?.ok_or("no 12-configuration instance")?;
    let m = PlanarMap::from_sigma(found.sigma.clone()).map_err(|e| e.to_string())?;
    let again = cancellation_check(&m, found.origin, &found.particles, 1);
    expect(again.configurations == 12 && again.signed_sum == 0, || format!("{again:?}"))?;
    Ok(format!("{} violating configurations sum to 0; 12-term instance sums to 0", s.violating_checked))
}

fn abs(x: &Real) -> Real {
    if *x < Real::ZERO {
        -x.clone()
    } else {
        x.clone()
    }
}

fn c9_singularity() -> Outcome {
    let inv27 = real(1.0) / real(27.0);
    for y in [0.5, 1.0, 2.0] {
        let t = Instant::now();
        let s = forest_singularity(&real(y), 1e-12).map_err(|e| e.to_string())?;
        expect(t.elapsed() < Duration::from_secs(5), || format!("y = {y} took {:?}", t.elapsed()))?;
        expect(s.u_star > Real::ZERO && s.u_star < inv27, || format!("u* out of range at y = {y}"))?;
        expect(abs(&s.dg_du) <= real(1e-12) * abs(&(&s.u_star * &s.d2g_du2)), || format!("residual at y = {y}"))?;
        expect(s.d2g_du2 < Real::ZERO, || format!("curvature sign at y = {y}"))?;
        expect(s.f_at_u_star < real(y), || format!("F(u*) >= y at y = {y}"))?;
        expect(s.classification == Classification::SquareRoot && s.classification.gamma() == -0.5, || "classification".into())?;
    }
    // u* climbs to 1/27 as y grows
    let mut gap = inv27.clone();
    for y in [5.0, 10.0, 20.0] {
        let s = forest_singularity(&real(y), 1e-12).map_err(|e| e.to_string())?;
        let g = &inv27 - &s.u_star;
        expect(g > Real::ZERO && g < gap, || format!("u* does not approach 1/27 at y = {y}"))?;
        gap = g;
    }
    let t = spanning_tree_singularity();
    expect(t.u_star == inv27 && t.classification == Classification::TreeLog && t.classification.gamma() == -1.0, || "spanning-tree limit".into())?;
    Ok("y = 0.5, 1, 2 square-root; spanning-tree limit at 1/27".into())
}

fn spanning_dual(c: &mobile_atlas::planar_map::BlockedConfig) -> bool {
    let m = c.map();
    let mut parent: Vec<usize> = (0..m.face_count()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let blocked = c.blocked_edges();
    for &e in &blocked {
        let [a, b] = m.edge_darts(e);
        let (x, y) = (find(&mut parent, m.face(a)), find(&mut parent, m.face(b)));
        if x == y {
            return false;
        }
        parent[x] = y;
    }
    blocked.len() + 1 == m.face_count()
}

fn c10_max_blocked() -> Outcome {
    let r = max_blocked_report(4, Exec::default()).map_err(|e| e.to_string())?;
    reports_ok(std::slice::from_ref(&r))?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..100 {
        let t = random_balanced_tree(&mut rng, 12);
        let lm = leaf_matching(&t).map_err(|e| format!("tree {i}: {e}"))?;
        expect(validate_blocking(&lm.config).valid, || format!("tree {i}: invalid blocking"))?;
        expect(spanning_dual(&lm.config), || format!("tree {i}: blocked dual is not a spanning tree"))?;
    }
    Ok("Z to 4 faces; 100 random trees matched".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("forest expansion", 5, c1_forest),
        ("hard particles on triangulations", 30, c2_hard_particles),
        ("Ising", 10, c3_ising),
        ("series identities", 30, c4_identities),
        ("ternary kernel", 1, c5_kernel),
        ("bijection round trip", 60, c6_round_trip),
        ("oracle against series", 60, c7_oracle_series),
        ("cancellation", 30, c8_cancellation),
        ("singularity", 20, c9_singularity),
        ("maximally blocked maps", 30, c10_max_blocked),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > Duration::from_secs(*budget) => Err(format!("{msg}, but took {took:.2?} over {budget} s")),
            other => other,
        };
        match &outcome {
            Ok(msg) => println!("criterion {:>2} PASS {name} ({took:.2?}): {msg}", i + 1),
            Err(msg) => {
                println!("criterion {:>2} FAIL {name} ({took:.2?}): {msg}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
