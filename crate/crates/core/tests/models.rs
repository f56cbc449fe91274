use mobile_atlas::models::forest::{even_valent, forest, forest_equation, spanning_tree_f};
use mobile_atlas::models::hp::{hp_rooted, triangulation_hp};
use mobile_atlas::models::ising::ising;
use mobile_atlas::models::{hard_particles, solve, Grading, ModelSpec, Occupancy, Particles};
use mobile_atlas::planar_map::BlockMode;
use mobile_atlas::series::{AuxPoly, GSeries, Var};

fn poly(s: &str) -> AuxPoly {
    AuxPoly::parse(s).unwrap()
}

#[test]
fn generic_charged_system_matches_hp_closed_system() {
    let generic = hard_particles(&ModelSpec::hp_triangulation(), 12).unwrap();
    let closed = triangulation_hp(12).unwrap();
    assert_eq!(&generic.r(), closed.r());
    assert_eq!(&generic.g_series(), closed.g());
    assert_eq!(generic.b(0, 2), *closed.get("B2_0"));
    assert_eq!(generic.b(1, 2), *closed.get("B2_1"));
}

#[test]
fn generic_charged_system_matches_ising_closed_system() {
    let order = 3;
    let generic = hard_particles(&ModelSpec::ising(), 3 * order).unwrap();
    let closed = ising(order).unwrap();
    assert_eq!(generic.in_var(&generic.r(), "g").truncate(order), *closed.r());
    assert_eq!(generic.in_var(&generic.g_series(), "g").truncate(order), *closed.g());
}

#[test]
fn minus_one_direct_rules_match_symbolic_substitution() {
    // same model with symbolic y, relaxed occupancy rules written with [.]_+ / [.]_- and y
    let order = 4;
    let direct = hard_particles(&ModelSpec::hp_triangulation(), order).unwrap();
    let mut relaxed = ModelSpec::hp_triangulation();
    relaxed.y = AuxPoly::var("y");
    let symbolic = solve(&relaxed, order).unwrap();
    let yv = Var::new("y");
    let at = |s: &GSeries| s.substitute(yv, &AuxPoly::int(-1));
    assert_eq!(at(&symbolic.r()), direct.r());
    assert_eq!(at(&symbolic.g_series()), direct.g_series());
}

#[test]
fn no_occupancy_reduces_to_plain_eulerian_maps() {
    let mut spec = ModelSpec::hp_triangulation();
    spec.particles = Some(Particles { p: 1, z: vec![AuxPoly::one(), AuxPoly::zero()], constraints: Default::default() });
    let charged = hard_particles(&spec, 6).unwrap();
    let plain = solve(&ModelSpec::new(&[(3, poly("g"))], &[(3, poly("g"))], AuxPoly::zero()), 6).unwrap();
    assert_eq!(charged.r(), plain.r());
    assert_eq!(charged.g_series(), plain.g_series());
}

#[test]
fn duality_for_equal_weights() {
    let g = poly("g");
    let spec = ModelSpec::new(&[(3, g.clone())], &[(3, g.clone())], AuxPoly::var("y"));
    assert!(solve(&spec, 6).unwrap().duality_check());
    let spec = ModelSpec::new(&[(3, g.clone())], &[(3, g)], AuxPoly::zero());
    assert!(solve(&spec, 6).unwrap().duality_check());
    let empty = ModelSpec::new(&[], &[], AuxPoly::zero());
    assert!(solve(&empty, 3).unwrap().duality_check());
}

#[test]
fn duality_fails_for_perturbed_weights() {
    let g = poly("g");
    let mut spec = ModelSpec::new(&[(3, g.clone())], &[(3, g)], AuxPoly::var("y"));
    spec.black.insert(3, poly("2*g"));
    assert!(!solve(&spec, 4).unwrap().duality_check());
}

#[test]
fn blocked_series_vanishes_without_blockings() {
    let b = solve(&ModelSpec::quadrangulation(AuxPoly::zero()), 4).unwrap();
    let (_, be) = b.edge_rooted();
    assert!(be.is_zero());
}

#[test]
fn edge_rooted_without_blockings_counts_pointed_rooted_maps() {
    // rooted quadrangulations 2, 9, 54, each pointed at one of n + 2 vertices
    let b = solve(&ModelSpec::quadrangulation(AuxPoly::zero()), 3).unwrap();
    let (nbe, _) = b.edge_rooted();
    for (n, rooted) in [(1i64, 2i64), (2, 9), (3, 54)] {
        assert_eq!(nbe.coefficient(n as usize), &AuxPoly::int(rooted * (n + 2)), "g^{n}");
    }
}

#[test]
fn even_valent_quartic_only() {
    let r = even_valent(&[(2, poly("g"))], 4).unwrap();
    let f = forest_equation(4).unwrap().substitute(Var::new("y"), &AuxPoly::zero());
    assert_eq!(r, f);
    let trivial = even_valent(&[], 3).unwrap();
    assert_eq!(trivial, GSeries::one(3));
}

#[test]
fn forest_at_y_zero_is_plain_quadrangulations() {
    let f = forest(3).unwrap();
    let at0 = f.r.substitute(Var::new("y"), &AuxPoly::zero());
    assert_eq!(at0, GSeries::from_coeffs(vec![1, 3, 18, 135].into_iter().map(AuxPoly::int).collect()));
    assert_eq!(spanning_tree_f(3).coefficient(1), &AuxPoly::int(3));
}

#[test]
fn rooted_hp_triangulations() {
    let g = triangulation_hp(12).unwrap();
    let rooted = hp_rooted(g.g()).unwrap();
    assert_eq!(rooted.coefficient(2), &poly("1+2*z1"));
    assert_eq!(rooted.coefficient(12), &poly("18*(88+1056*z1+4512*z1^2+8416*z1^3+6801*z1^4+2080*z1^5+176*z1^6)"));
}

#[test]
fn occupancy_constraints_filter_weights() {
    let spec = ModelSpec::ising();
    let p = spec.particles.as_ref().unwrap();
    assert_eq!(p.constraints[&2], Occupancy::Required);
    assert_eq!(spec.grading, Grading::Faces);
    assert_eq!(spec.mode, BlockMode::Directed);
}
