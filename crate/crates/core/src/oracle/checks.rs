//! Oracle counts set against series coefficients, and the y = -1 cancellation.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::mobile::{check_well_labeled, enumerate_mobiles, face_nodes, from_mobile_with_mode, mobile_weight, to_mobile};
use crate::models::forest::{
    arch_factorization_holds, even_valent, forest, forest_equation, forest_vertex_weights, kernel_matches, one_way_substitution_holds,
};
use crate::models::hp::{hp_closed_forms_hold, triangulation_hp};
use crate::models::ising::{ising, ising_closed_forms_hold};
use crate::models::maxblocked::max_blocked;
use crate::models::{solve, ModelError, ModelSpec};
use crate::par::Exec;
use crate::planar_map::{bicolor_faces, distances_with, validate_blocking, BlockMode, BlockedConfig, Color, PlanarMap};
use crate::series::{AuxPoly, GSeries, Var};

use super::faces::FaceProfile;
use super::maps::enumerate_rooted_maps;
use super::weights::{balanced_profiles, weighted_count, weighted_counts, Blockings, Convention, Task};
use super::OracleError;

/// One comparison, polynomials in canonical string form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaskReport {
    pub name: String,
    pub expected: String,
    pub actual: String,
    #[serde(rename = "match")]
    pub matched: bool,
}

impl TaskReport {
    pub fn new(name: impl Into<String>, expected: &AuxPoly, actual: &AuxPoly) -> TaskReport {
        TaskReport { name: name.into(), expected: expected.to_string(), actual: actual.to_string(), matched: expected == actual }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn poly(s: &str) -> AuxPoly {
    AuxPoly::parse(s).expect("built-in polynomial")
}

fn coeff(p: &AuxPoly, v: &str, n: usize) -> AuxPoly {
    p.coefficient_in(Var::new(v), n as u32)
}

/// Every balanced profile with at most `max_faces` faces of the given valences and
/// at most `max_edges` edges.
pub fn all_profiles(max_faces: usize, valences: &[usize], max_edges: usize) -> Vec<FaceProfile> {
    let kinds: Vec<(Color, usize)> = [Color::Black, Color::White].iter().flat_map(|&c| valences.iter().map(move |&k| (c, k))).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(kinds: &[(Color, usize)], start: usize, left: usize, current: &mut Vec<(Color, usize)>, out: &mut Vec<FaceProfile>, max_edges: usize) {
        if !current.is_empty() {
            let p = FaceProfile::new(current.clone());
            if p.edges().is_some_and(|e| e <= max_edges) {
                out.push(p);
            }
        }
        if left == 0 {
            return;
        }
        for i in start..kinds.len() {
            current.push(kinds[i]);
            rec(kinds, i, left - 1, current, out, max_edges);
            current.pop();
        }
    }
    rec(&kinds, 0, max_faces, &mut current, &mut out, max_edges);
    out
}

fn task(profiles: Vec<FaceProfile>, w: impl Fn(Color, usize, u8) -> Option<AuxPoly> + Send + Sync + 'static) -> Task {
    Task {
        profiles,
        face_weight: Arc::new(w),
        max_particles: 0,
        blockings: Blockings::All,
        mode: BlockMode::Directed,
        y: AuxPoly::var("y"),
        convention: Convention::R,
    }
}

/// Compares the `g^n` coefficient of each oracle convention with its series.
fn compare(t: &Task, cases: &[(&str, Convention, &GSeries)], n: usize, exec: Exec) -> Result<Vec<TaskReport>, CheckError> {
    let conventions: Vec<Convention> = cases.iter().map(|c| c.1).collect();
    let counts = weighted_counts(t, &conventions, exec)?;
    Ok(cases.iter().zip(counts).map(|((name, _, s), c)| TaskReport::new(format!("{name} g^{n}"), s.coefficient(n), &coeff(&c, "g", n))).collect())
}

fn both_conventions(name: &str, t: Task, r: &GSeries, g: &GSeries, n: usize, exec: Exec) -> Result<Vec<TaskReport>, CheckError> {
    compare(&t, &[(&format!("{name} R"), Convention::R, r), (&format!("{name} G"), Convention::G, g)], n, exec)
}

/// Directed blockings of quadrangulations against pair blockings with `g -> g (1 + y)^2`,
/// profile by profile up to `max_faces` white faces.
pub fn pair_correspondence_reports(max_faces: usize, exec: Exec) -> Result<Vec<TaskReport>, CheckError> {
    let mut out = Vec::new();
    for n in 1..=max_faces {
        let g_shift = poly("g*(1+y)^2");
        let profile = vec![FaceProfile::from_counts(&[(4, n)], &[(2, 2 * n)])];
        let weights = |c: Color, k: usize, _: u8| match (c, k) {
            (Color::White, 4) => Some(poly("g")),
            (Color::Black, 2) => Some(AuxPoly::one()),
            _ => None,
        };
        let directed = weighted_count(&task(profile.clone(), weights), exec)?;
        let mut t = task(profile, move |c, k, p| weights(c, k, p).map(|w| if c == Color::White { g_shift.clone() } else { w }));
        t.mode = BlockMode::Pairs;
        let pairs = weighted_count(&t, exec)?;
        out.push(TaskReport::new(format!("directed against pairs, {n} white faces"), &pairs, &directed));
    }
    Ok(out)
}

/// Forests on quadrangulations up to `g^order`: white 4-gons and blocked pairs of black 2-gons.
pub fn forest_reports(order: usize, exec: Exec) -> Result<Vec<TaskReport>, CheckError> {
    let f = forest(order)?;
    let (r, g) = (f.r.clone(), f.bundle.g_series());
    let mut out = Vec::new();
    for n in 1..=order {
        let mut t = task(vec![FaceProfile::from_counts(&[(4, n)], &[(2, 2 * n)])], |c, k, _| match (c, k) {
            (Color::White, 4) => Some(poly("g")),
            (Color::Black, 2) => Some(AuxPoly::one()),
            _ => None,
        });
        t.mode = BlockMode::Pairs;
        out.extend(both_conventions("forest", t, &r, &g, n, exec)?);
    }
    Ok(out)
}

/// Eulerian triangulations with hard particles up to `g^order` at `y = -1`.
pub fn hp_reports(order: usize, exec: Exec) -> Result<Vec<TaskReport>, CheckError> {
    let b = triangulation_hp(order)?;
    let mut out = Vec::new();
    for n in (2..=order).step_by(2) {
        let mut t =
            task(vec![FaceProfile::from_counts(&[(3, n / 2)], &[(3, n / 2)])], |_, k, p| (k == 3).then(|| if p == 0 { poly("g") } else { poly("g*z1") }));
        t.max_particles = 1;
        t.blockings = Blockings::Violating(1);
        t.y = AuxPoly::int(-1);
        out.extend(both_conventions("hp", t, b.r(), b.g(), n, exec)?);
    }
    Ok(out)
}

/// Ising quadrangulations up to `g^order`: empty 4-gons and occupied 2-gons, `y = -1`.
///
/// A configuration obeying exclusion has at most one 2-gon per quadrangulation edge,
/// so `2n` bivalent faces suffice at `g^n`; larger ones cancel.
pub fn ising_reports(order: usize, exec: Exec) -> Result<Vec<TaskReport>, CheckError> {
    let b = ising(order)?;
    let mut out = Vec::new();
    for n in 1..=order {
        let profiles = (0..=2 * n).flat_map(|m| balanced_profiles(&[(4, n), (2, m)])).collect();
        let mut t = task(profiles, |_, k, p| match (k, p) {
            (4, 0) => Some(poly("g")),
            (2, 1) => Some(poly("z1")),
            _ => None,
        });
        t.max_particles = 1;
        t.blockings = Blockings::Violating(1);
        t.y = AuxPoly::int(-1);
        out.extend(both_conventions("ising", t, b.r(), b.g(), n, exec)?);
    }
    Ok(out)
}

/// The generic system with symbolic `y` against the non-blocked and blocked marked-edge
/// counts, on directed quadrangulations up to `g^order`.
pub fn edge_rooted_reports(order: usize, exec: Exec) -> Result<Vec<TaskReport>, CheckError> {
    let bundle = solve(&ModelSpec::quadrangulation(poly("y")), order)?;
    let (nbe, be) = bundle.edge_rooted();
    let mut out = Vec::new();
    for n in 1..=order {
        let t = task(vec![FaceProfile::from_counts(&[(4, n)], &[(2, 2 * n)])], |c, k, _| match (c, k) {
            (Color::White, 4) => Some(poly("g")),
            (Color::Black, 2) => Some(AuxPoly::one()),
            _ => None,
        });
        let r = bundle.r();
        let cases = [("one-way non-blocked", Convention::NonBlocked, &nbe), ("one-way blocked", Convention::Blocked, &be), ("one-way R", Convention::R, &r)];
        out.extend(compare(&t, &cases, n, exec)?);
    }
    Ok(out)
}

/// Plain Eulerian maps (`y = 0`) with faces of valence 1 to 3, `g` per face.
pub fn plain_reports(max_faces: usize, exec: Exec) -> Result<Vec<TaskReport>, CheckError> {
    let faces: Vec<(usize, AuxPoly)> = (1..=3).map(|k| (k, poly("g"))).collect();
    let bundle = solve(&ModelSpec::new(&faces, &faces, AuxPoly::zero()), max_faces)?;
    let mut t = task(all_profiles(max_faces, &[1, 2, 3], super::MAX_PROFILE_EDGES), |_, _, _| Some(poly("g")));
    t.mode = BlockMode::None;
    t.y = AuxPoly::zero();
    let mut out = Vec::new();
    for n in 1..=max_faces {
        out.extend(both_conventions("plain", t.clone(), &bundle.r(), &bundle.g_series(), n, exec)?);
    }
    Ok(out)
}

/// `Z` for maximally blocked maps against the oracle, up to `max_faces` faces of
/// valence at most 4, weights `a_k` (white) and `b_k` (black).
pub fn max_blocked_report(max_faces: usize, exec: Exec) -> Result<TaskReport, CheckError> {
    let ks = [1usize, 2, 3, 4];
    let alpha: Vec<(usize, AuxPoly)> = ks.iter().map(|&k| (k, AuxPoly::var(&format!("a{k}")))).collect();
    let alpha_t: Vec<(usize, AuxPoly)> = ks.iter().map(|&k| (k, AuxPoly::var(&format!("b{k}")))).collect();
    let z = max_blocked(&alpha, &alpha_t, max_faces)?.z.flatten();
    let mut t = task(all_profiles(max_faces, &ks, super::MAX_PROFILE_EDGES), |c, k, _| {
        Some(AuxPoly::var(&match c {
            Color::White => format!("a{k}"),
            Color::Black => format!("b{k}"),
        }))
    });
    t.blockings = Blockings::Maximal;
    t.y = AuxPoly::one();
    let counted = weighted_count(&t, exec)?;
    Ok(TaskReport::new(format!("max-blocked Z to {max_faces} faces"), &z, &counted))
}

/// Weighted count of enumerated mobiles against the oracle's R-convention count of
/// maps, grouped by number of faces, up to `max_faces`.
pub fn mobile_count_equivalence(spec: &ModelSpec, max_faces: usize, exec: Exec) -> Result<Vec<TaskReport>, CheckError> {
    let mut by_faces = vec![AuxPoly::zero(); max_faces + 1];
    for m in enumerate_mobiles(spec, max_faces) {
        if let Some(w) = mobile_weight(spec, &m) {
            by_faces[face_nodes(&m)].add_assign_ref(&w);
        }
    }
    let valences: Vec<usize> = spec.white.keys().chain(spec.black.keys()).copied().collect::<BTreeSet<_>>().into_iter().collect();
    let profiles = all_profiles(max_faces, &valences, super::MAX_PROFILE_EDGES);
    let s = spec.clone();
    let mut t = task(Vec::new(), move |c, k, p| s.face_weight(c, k, p as usize));
    t.mode = spec.mode;
    t.y = spec.y.clone();
    if let Some(p) = &spec.particles {
        t.max_particles = p.p;
        t.blockings = Blockings::Violating(p.p);
    }
    let mut out = vec![TaskReport::new("mobiles with 0 faces", &by_faces[0], &AuxPoly::one())];
    for (n, mobiles) in by_faces.iter().enumerate().skip(1) {
        t.profiles = profiles.iter().filter(|p| p.faces().len() == n).cloned().collect();
        let maps = weighted_count(&t, exec)?;
        out.push(TaskReport::new(format!("mobiles with {n} faces"), &maps, mobiles));
    }
    Ok(out)
}

/// Every comparison of the oracle-series suite at the default sizes.
pub fn oracle_series_reports(exec: Exec) -> Result<Vec<TaskReport>, CheckError> {
    let mut out = forest_reports(2, exec)?;
    out.extend(hp_reports(4, exec)?);
    out.extend(ising_reports(2, exec)?);
    out.extend(edge_rooted_reports(2, exec)?);
    out.extend(plain_reports(3, exec)?);
    out.push(max_blocked_report(4, exec)?);
    Ok(out)
}

/// Restricted blockings of one pointed map with particles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cancellation {
    /// valid blocked sets using only violating edges
    pub configurations: usize,
    /// sum of `(-1)^blocked` over them
    pub signed_sum: i64,
    pub violating_edges: usize,
}

/// Whether any edge joins faces holding more than `p` particles in total.
pub fn violates(m: &PlanarMap, particles: &[u8], p: u8) -> bool {
    violating_edges(m, particles, p).next().is_some()
}

fn violating_edges<'a>(m: &'a PlanarMap, particles: &'a [u8], p: u8) -> impl Iterator<Item = usize> + 'a {
    (0..m.edge_count()).filter(move |&e| {
        let [a, b] = m.edge_darts(e);
        particles[m.face(a)] + particles[m.face(b)] > p
    })
}

/// Sums `(-1)^k` over valid blockings of `k` violating edges, directed mode.
pub fn cancellation_check(m: &PlanarMap, origin: usize, particles: &[u8], p: u8) -> Cancellation {
    let col = bicolor_faces(m).expect("Eulerian map");
    let edges: Vec<usize> = violating_edges(m, particles, p).collect();
    let mut blocked = vec![false; m.edge_count()];
    let (mut configurations, mut signed_sum) = (0, 0i64);
    for mask in 0u64..1 << edges.len() {
        for (i, &e) in edges.iter().enumerate() {
            blocked[e] = mask >> i & 1 == 1;
        }
        if distances_with(m, &col, origin, &blocked).is_ok() {
            configurations += 1;
            signed_sum += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    Cancellation { configurations, signed_sum, violating_edges: edges.len() }
}

/// A pointed map with particles whose restricted sum did not behave.
#[derive(Clone, Debug, Serialize)]
pub struct CancellationFailure {
    pub sigma: Vec<u32>,
    pub origin: usize,
    pub particles: Vec<u8>,
    pub result: Cancellation,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CancellationSummary {
    pub violating_checked: usize,
    pub satisfying_checked: usize,
    pub failures: Vec<CancellationFailure>,
}

fn particle_vectors(f: usize, p: u8) -> impl Iterator<Item = Vec<u8>> {
    let base = p as usize + 1;
    (0..base.pow(f as u32)).map(move |mut x| {
        (0..f)
            .map(|_| {
                let d = (x % base) as u8;
                x /= base;
                d
            })
            .collect()
    })
}

/// Runs the cancellation over every Eulerian map with at most `max_edges` edges, every
/// origin and every particle configuration with at most `p` particles per face.
/// Violating configurations must sum to 0; the others must contribute exactly one term.
pub fn exhaustive_cancellation(max_edges: usize, p: u8, exec: Exec) -> Result<CancellationSummary, CheckError> {
    let mut summary = CancellationSummary::default();
    for e in 1..=max_edges {
        let maps = enumerate_rooted_maps(e, true, exec)?.maps;
        let parts = exec.map(&maps, |m| {
            let mut s = CancellationSummary::default();
            for origin in 0..m.vertex_count() {
                for particles in particle_vectors(m.face_count(), p) {
                    let r = cancellation_check(m, origin, &particles, p);
                    let ok = if r.violating_edges > 0 {
                        s.violating_checked += 1;
                        r.signed_sum == 0
                    } else {
                        s.satisfying_checked += 1;
                        r.configurations == 1 && r.signed_sum == 1
                    };
                    if !ok {
                        s.failures.push(CancellationFailure { sigma: m.sigma_slice().to_vec(), origin, particles, result: r });
                    }
                }
            }
            s
        });
        for s in parts {
            summary.violating_checked += s.violating_checked;
            summary.satisfying_checked += s.satisfying_checked;
            summary.failures.extend(s.failures);
        }
    }
    Ok(summary)
}

/// A pointed map carrying `particles` single particles that violate hard-core exclusion
/// and admits exactly `configurations` restricted valid blockings.
#[derive(Clone, Debug, Serialize)]
pub struct CancellationInstance {
    pub sigma: Vec<u32>,
    pub origin: usize,
    pub particles: Vec<u8>,
    pub result: Cancellation,
}

/// Searches the Eulerian maps with at most `max_edges` edges for such an instance,
/// smallest maps first.
pub fn find_cancellation_instance(particles: usize, configurations: usize, max_edges: usize, exec: Exec) -> Result<Option<CancellationInstance>, CheckError> {
    for e in 1..=max_edges {
        let maps = enumerate_rooted_maps(e, true, exec)?.maps;
        for m in &maps {
            if m.face_count() < particles {
                continue;
            }
            for occ in particle_vectors(m.face_count(), 1).filter(|v| v.iter().filter(|&&x| x == 1).count() == particles) {
                if !violates(m, &occ, 1) {
                    continue;
                }
                for origin in 0..m.vertex_count() {
                    let r = cancellation_check(m, origin, &occ, 1);
                    if r.configurations == configurations {
                        return Ok(Some(CancellationInstance { sigma: m.sigma_slice().to_vec(), origin, particles: occ, result: r }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// A blocked configuration that did not survive the trip through its mobile.
#[derive(Clone, Debug, Serialize)]
pub struct RoundTripFailure {
    pub sigma: Vec<u32>,
    pub origin: usize,
    pub blocked: Vec<usize>,
    pub pairs: bool,
    pub reason: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RoundTripSummary {
    pub directed: usize,
    pub pairs: usize,
    pub failures: Vec<RoundTripFailure>,
}

fn round_trip_one(c: &BlockedConfig) -> Result<(), String> {
    let mob = to_mobile(c).map_err(|e| e.to_string())?;
    let report = check_well_labeled(&mob);
    if let Some(v) = report.violations.first() {
        return Err(format!("mobile not well labeled: {v}"));
    }
    let back = from_mobile_with_mode(&mob, c.mode()).map_err(|e| e.to_string())?;
    if back.canonical_key() != c.canonical_key() {
        return Err("decoded map differs".into());
    }
    Ok(())
}

/// Encodes and decodes every valid blocking of every pointed Eulerian map with at most
/// `max_edges` edges, in both modes. Single-vertex maps have no mobile and are skipped.
pub fn roundtrip_suite(max_edges: usize, exec: Exec) -> Result<RoundTripSummary, CheckError> {
    let mut summary = RoundTripSummary::default();
    for e in 1..=max_edges {
        let maps = enumerate_rooted_maps(e, true, exec)?.maps;
        let parts = exec.map(&maps, |m| {
            let mut s = RoundTripSummary::default();
            if m.vertex_count() == 1 {
                return s;
            }
            for mode in [BlockMode::Directed, BlockMode::Pairs] {
                for origin in 0..m.vertex_count() {
                    let base = BlockedConfig::new(m.clone(), origin, &[], mode).expect("Eulerian map");
                    for mask in 0u64..1 << m.edge_count() {
                        let c = base.with_blocked_flags((0..m.edge_count()).map(|i| mask >> i & 1 == 1).collect());
                        if !validate_blocking(&c).valid {
                            continue;
                        }
                        match mode {
                            BlockMode::Pairs => s.pairs += 1,
                            _ => s.directed += 1,
                        }
                        if let Err(reason) = round_trip_one(&c) {
                            s.failures.push(RoundTripFailure {
                                sigma: m.sigma_slice().to_vec(),
                                origin,
                                blocked: c.blocked_edges(),
                                pairs: mode == BlockMode::Pairs,
                                reason,
                            });
                        }
                    }
                }
            }
            s
        });
        for s in parts {
            summary.directed += s.directed;
            summary.pairs += s.pairs;
            summary.failures.extend(s.failures);
        }
    }
    Ok(summary)
}

/// A named series identity and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl IdentityReport {
    fn from_result<E: std::fmt::Display>(name: &str, r: Result<bool, E>) -> IdentityReport {
        match r {
            Ok(holds) => IdentityReport { name: name.into(), holds, detail: None },
            Err(e) => IdentityReport { name: name.into(), holds: false, detail: Some(e.to_string()) },
        }
    }
}

/// Exact identities between the models, to `order`.
pub fn identity_reports(order: usize) -> Vec<IdentityReport> {
    vec![
        IdentityReport::from_result("one-way series at g(1+y)^2 equals the forest series", one_way_substitution_holds(order)),
        IdentityReport::from_result(
            "even-valent series with forest vertex weights equals the forest series",
            even_valent(&forest_vertex_weights(order), order).and_then(|r| Ok(r == forest_equation(order)?)),
        ),
        IdentityReport::from_result("Ising recursion equals its older form", ising(order).and_then(|b| ising_closed_forms_hold(&b).map(|_| true))),
        IdentityReport::from_result("HP closed forms", triangulation_hp(order).and_then(|b| hp_closed_forms_hold(&b).map(|_| true))),
        IdentityReport::from_result("ternary kernel", kernel_matches(order)),
        IdentityReport::from_result("arch factorization to n = 50", Ok::<_, ModelError>((1..=50).all(arch_factorization_holds))),
    ]
}

/// White/black duality for models with equal colour weights, to `order`.
pub fn duality_reports(order: usize) -> Vec<IdentityReport> {
    let g = poly("g");
    let cases = [
        ("triangles, symbolic y", ModelSpec::new(&[(3, g.clone())], &[(3, g.clone())], poly("y"))),
        ("quadrangles, symbolic y", ModelSpec::new(&[(4, g.clone())], &[(4, g.clone())], poly("y"))),
        (
            "valences 1 to 4, y = 2",
            ModelSpec::new(&(1..=4).map(|k| (k, g.clone())).collect::<Vec<_>>(), &(1..=4).map(|k| (k, g.clone())).collect::<Vec<_>>(), poly("2")),
        ),
    ];
    cases.into_iter().map(|(name, s)| IdentityReport::from_result(name, solve(&s, order).map(|b| b.duality_check()))).collect()
}
