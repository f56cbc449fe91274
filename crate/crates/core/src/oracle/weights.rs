//! Weighted counts of decorated maps: origin, particles, blockings and a marked edge.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::par::Exec;
use crate::planar_map::{bicolor_faces, Bicoloring, BlockMode, Color, PlanarMap};
use crate::series::AuxPoly;

use super::faces::FaceProfile;
use super::OracleError;

/// Which edge is distinguished in the count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// a non-blocked edge from distance m to m+1
    R,
    /// any edge
    G,
    /// a non-blocked edge
    NonBlocked,
    /// a blocked edge
    Blocked,
}

/// Weight of a face given its colour, valence and particle count; `None` forbids it.
pub type FaceWeight = Arc<dyn Fn(Color, usize, u8) -> Option<AuxPoly> + Send + Sync>;

/// Which blockings are summed over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Blockings {
    /// every valid blocked set allowed by the mode
    All,
    /// only edges between faces holding more than `p` particles in total may be blocked
    Violating(u8),
    /// valid blocked sets with exactly `F - 1` blocked edges
    Maximal,
}

#[derive(Clone)]
pub struct Task {
    pub profiles: Vec<FaceProfile>,
    pub face_weight: FaceWeight,
    /// particles per face range over `0..=max_particles`
    pub max_particles: u8,
    pub blockings: Blockings,
    pub mode: BlockMode,
    /// weight of one blocked unit (an edge, or a pair in pair mode)
    pub y: AuxPoly,
    pub convention: Convention,
}

/// Blocking units: sets of edges that are blocked together.
fn units(m: &PlanarMap, col: &Bicoloring, mode: BlockMode) -> Vec<Vec<usize>> {
    match mode {
        BlockMode::None => Vec::new(),
        BlockMode::Directed => (0..m.edge_count()).map(|e| vec![e]).collect(),
        BlockMode::Pairs => (0..m.face_count())
            .filter(|&f| col.is_black(f) && m.face_valence(f) == 2)
            .map(|f| m.face_darts(f).iter().map(|&d| m.edge(d as usize)).collect())
            .collect(),
    }
}

struct Scratch {
    blocked: Vec<bool>,
    dist: Vec<u32>,
    queue: Vec<usize>,
}

impl Scratch {
    fn new() -> Scratch {
        Scratch { blocked: Vec::new(), dist: Vec::new(), queue: Vec::new() }
    }
}

/// Forward darts out of each vertex as `(edge, head)`.
fn forward_out(m: &PlanarMap, col: &Bicoloring) -> Vec<Vec<(usize, usize)>> {
    (0..m.vertex_count())
        .map(|v| m.vertex_darts(v).iter().map(|&d| d as usize).filter(|&d| col.is_forward(m, d)).map(|d| (m.edge(d), m.head(d))).collect())
        .collect()
}

/// Breadth-first distances into `scratch.dist`; false if some vertex is unreachable.
fn reach(out: &[Vec<(usize, usize)>], origin: usize, scratch: &mut Scratch) -> bool {
    let Scratch { blocked, dist, queue } = scratch;
    dist.clear();
    dist.resize(out.len(), u32::MAX);
    queue.clear();
    dist[origin] = 0;
    queue.push(origin);
    let mut i = 0;
    while i < queue.len() {
        let v = queue[i];
        i += 1;
        for &(e, w) in &out[v] {
            if !blocked[e] && dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push(w);
            }
        }
    }
    queue.len() == out.len()
}

/// Sum over origins, particle assignments and blockings of one map, one total per convention.
fn map_weight(task: &Task, conventions: &[Convention], m: &PlanarMap, scratch: &mut Scratch) -> Vec<AuxPoly> {
    let col = bicolor_faces(m).expect("profile maps are Eulerian");
    let f = m.face_count();
    let all_units = units(m, &col, task.mode);
    let out = forward_out(m, &col);
    let mut total = vec![AuxPoly::zero(); conventions.len()];
    let mut particles = vec![0u8; f];
    loop {
        // face weights for this particle assignment
        let mut fw = AuxPoly::one();
        let mut ok = true;
        for face in 0..f {
            match (task.face_weight)(col.color(face), m.face_valence(face), particles[face]) {
                Some(w) => fw = &fw * &w,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && !fw.is_zero() {
            let allowed: Vec<&Vec<usize>> = all_units
                .iter()
                .filter(|u| match task.blockings {
                    Blockings::Violating(p) => u.iter().all(|&e| {
                        let [a, b] = m.edge_darts(e);
                        particles[m.face(a)] + particles[m.face(b)] > p
                    }),
                    _ => true,
                })
                .collect();
            // marked-edge counts per convention and number of blocked units
            let mut counts = vec![vec![0u64; allowed.len() + 1]; conventions.len()];
            for origin in 0..m.vertex_count() {
                for mask in 0u64..(1u64 << allowed.len()) {
                    let k = mask.count_ones() as usize;
                    scratch.blocked.clear();
                    scratch.blocked.resize(m.edge_count(), false);
                    for (i, u) in allowed.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            for &e in u.iter() {
                                scratch.blocked[e] = true;
                            }
                        }
                    }
                    let nblocked = scratch.blocked.iter().filter(|&&b| b).count();
                    if task.blockings == Blockings::Maximal && nblocked + 1 != f {
                        continue;
                    }
                    if !reach(&out, origin, scratch) {
                        continue;
                    }
                    for (c, row) in conventions.iter().zip(counts.iter_mut()) {
                        row[k] += match c {
                            Convention::G => m.edge_count(),
                            Convention::Blocked => nblocked,
                            Convention::NonBlocked => m.edge_count() - nblocked,
                            Convention::R => (0..m.edge_count())
                                .filter(|&e| {
                                    let d = col.forward_dart(m, e);
                                    !scratch.blocked[e] && scratch.dist[m.head(d)] == scratch.dist[m.vertex(d)] + 1
                                })
                                .count(),
                        } as u64;
                    }
                }
            }
            let inner = counts.iter().map(|row| {
                let mut p = AuxPoly::zero();
                for (k, &n) in row.iter().enumerate().filter(|(_, &n)| n > 0) {
                    p.add_assign_ref(&task.y.pow(k as u32).scale(&BigRational::from_integer(BigInt::from(n))));
                }
                p
            });
            for (t, i) in total.iter_mut().zip(inner) {
                t.add_product(&fw, &i);
            }
        }
        // next particle assignment
        let mut i = 0;
        while i < f && particles[i] == task.max_particles {
            particles[i] = 0;
            i += 1;
        }
        if i == f {
            break;
        }
        particles[i] += 1;
    }
    total
}

/// Exact weighted count over every face profile of the task.
pub fn weighted_count(task: &Task, exec: Exec) -> Result<AuxPoly, OracleError> {
    Ok(weighted_counts(task, &[task.convention], exec)?.remove(0))
}

/// As [`weighted_count`] for several conventions in one pass; `task.convention` is ignored.
pub fn weighted_counts(task: &Task, conventions: &[Convention], exec: Exec) -> Result<Vec<AuxPoly>, OracleError> {
    let n = conventions.len();
    let add = |mut a: Vec<AuxPoly>, b: Vec<AuxPoly>| {
        for (x, y) in a.iter_mut().zip(&b) {
            x.add_assign_ref(y);
        }
        a
    };
    let mut out = vec![AuxPoly::zero(); n];
    for profile in &task.profiles {
        let sum = profile.fold_maps(
            exec,
            || vec![AuxPoly::zero(); n],
            |acc, m| {
                let mut scratch = Scratch::new();
                add(acc, map_weight(task, conventions, m, &mut scratch))
            },
            add,
        )?;
        let c = BigRational::from_integer(profile.centralizer_order()).recip();
        for (o, s) in out.iter_mut().zip(sum) {
            let q = s.scale(&c);
            if q.terms().any(|(_, v)| !v.is_integer()) {
                return Err(OracleError::NonDivisible(format!("profile {:?}", profile.faces())));
            }
            o.add_assign_ref(&q);
        }
    }
    Ok(out)
}

/// All ways to colour `(valence, count)` faces so that black and white valences balance.
pub fn balanced_profiles(faces: &[(usize, usize)]) -> Vec<FaceProfile> {
    let mut out = Vec::new();
    let mut split = vec![0usize; faces.len()];
    loop {
        let mut white = Vec::new();
        let mut black = Vec::new();
        for (i, &(k, m)) in faces.iter().enumerate() {
            if split[i] > 0 {
                black.push((k, split[i]));
            }
            if m > split[i] {
                white.push((k, m - split[i]));
            }
        }
        let p = FaceProfile::from_counts(&white, &black);
        if p.edges().is_some() {
            out.push(p);
        }
        let mut i = 0;
        while i < faces.len() && split[i] == faces[i].1 {
            split[i] = 0;
            i += 1;
        }
        if i == faces.len() {
            break;
        }
        split[i] += 1;
    }
    out
}
