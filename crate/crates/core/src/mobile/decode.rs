use std::collections::HashMap;

use crate::planar_map::{BlockMode, BlockedConfig, PlanarMap};

use super::check::check_well_labeled;
use super::contour::{contour_unchecked, ContourWord, TokenKind};
use super::types::{Mobile, Node};
use super::MobileError;

/// Where a chord lands: a labeled corner (by contour position) or the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Corner(usize),
    Origin,
}

/// Successor of every token: the first later corner labeled one less (from a corner)
/// or equal (from a flag); labels that would reach 0 point at the origin.
fn successors(word: &ContourWord) -> Result<Vec<Target>, MobileError> {
    let n = word.len();
    let mut by_label: HashMap<i64, Vec<usize>> = HashMap::new();
    for (p, t) in word.tokens.iter().enumerate() {
        if t.is_corner() {
            by_label.entry(t.value).or_default().push(p);
        }
    }
    let mut out = Vec::with_capacity(n);
    for (p, t) in word.tokens.iter().enumerate() {
        let want = if t.is_corner() { t.value - 1 } else { t.value };
        if want == 0 {
            out.push(Target::Origin);
            continue;
        }
        let list = by_label.get(&want).ok_or_else(|| MobileError::NotWellLabeled(format!("no corner labeled {want} for token at {p}")))?;
        let i = list.partition_point(|&q| q <= p);
        out.push(Target::Corner(list[i % list.len()]));
    }
    Ok(out)
}

/// Rebuilds the pointed map; darts `2i` and `2i + 1` are the forward and backward
/// darts of edge `i`.
pub fn from_mobile(m: &Mobile) -> Result<BlockedConfig, MobileError> {
    from_mobile_with_mode(m, BlockMode::Directed)
}

pub fn from_mobile_with_mode(m: &Mobile, mode: BlockMode) -> Result<BlockedConfig, MobileError> {
    let report = check_well_labeled(m);
    if let Some(v) = report.violations.first() {
        return Err(MobileError::NotWellLabeled(v.to_string()));
    }
    if m.edge_count() == 0 {
        return Err(MobileError::NotWellLabeled("a mobile without edges encodes no map".into()));
    }
    let mut unrooted = m.clone();
    unrooted.set_root(None);
    let word = contour_unchecked(&unrooted)?;
    if let Some(i) = word.ratchet_violation() {
        return Err(MobileError::RatchetViolated(i));
    }
    let len = word.len();
    let succ = successors(&word)?;

    // chords attached at each corner: (distance key, dart)
    let mut at_corner: Vec<Vec<(usize, u32)>> = vec![Vec::new(); len];
    let mut at_origin: Vec<(usize, u32)> = Vec::new();
    let mut flag_pos: HashMap<(usize, bool), usize> = HashMap::new();
    for (p, t) in word.tokens.iter().enumerate() {
        if let TokenKind::Flag { edge, left } = t.kind {
            flag_pos.insert((edge, left), p);
        }
    }
    let fwd = |from: usize, to: usize| (to + len - from) % len;
    let mut attach = |src: usize, dart: u32, at_corner: &mut Vec<Vec<(usize, u32)>>| match succ[src] {
        Target::Origin => at_origin.push((src, dart)),
        Target::Corner(c) => at_corner[c].push((fwd(c, src), dart)),
    };
    let mut blocked = Vec::new();
    let mut edge_id = 0u32;
    for (p, t) in word.tokens.iter().enumerate() {
        match t.kind {
            TokenKind::Corner { .. } => {
                // edge from the successor up to this vertex
                let (fd, bd) = (2 * edge_id, 2 * edge_id + 1);
                let own_key = match succ[p] {
                    Target::Origin => 0,
                    Target::Corner(c) => fwd(p, c),
                };
                at_corner[p].push((own_key, bd));
                attach(p, fd, &mut at_corner);
                edge_id += 1;
            }
            TokenKind::Flag { edge, left: true } => {
                let right = flag_pos[&(edge, false)];
                let (fd, bd) = (2 * edge_id, 2 * edge_id + 1);
                attach(right, fd, &mut at_corner);
                attach(p, bd, &mut at_corner);
                if m.edge(edge).kind.is_marked() {
                    blocked.push(edge_id as usize);
                }
                edge_id += 1;
            }
            TokenKind::Flag { left: false, .. } => {}
        }
    }
    let darts = 2 * edge_id as usize;
    let mut sigma = vec![u32::MAX; darts];
    let mut close = |ccw: &[u32]| {
        for i in 0..ccw.len() {
            sigma[ccw[i] as usize] = ccw[(i + 1) % ccw.len()];
        }
    };
    // corners of each labeled vertex in contour order are its corners clockwise
    let mut corners_of: HashMap<usize, Vec<usize>> = HashMap::new();
    for (p, t) in word.tokens.iter().enumerate() {
        if let TokenKind::Corner { node, .. } = t.kind {
            corners_of.entry(node).or_default().push(p);
        }
    }
    for x in 0..m.node_count() {
        if !matches!(m.node(x), Node::Labeled(_)) {
            continue;
        }
        let mut ccw = Vec::new();
        for &c in corners_of[&x].iter().rev() {
            let mut list = at_corner[c].clone();
            list.sort_unstable();
            ccw.extend(list.into_iter().map(|(_, d)| d));
        }
        close(&ccw);
    }
    at_origin.sort_unstable();
    let origin_darts: Vec<u32> = at_origin.iter().map(|&(_, d)| d).collect();
    if origin_darts.is_empty() {
        return Err(MobileError::NotWellLabeled("no chord reaches the origin".into()));
    }
    close(&origin_darts);
    debug_assert!(sigma.iter().all(|&s| s != u32::MAX));
    let map = PlanarMap::from_sigma(sigma)?;
    let origin = map.vertex(origin_darts[0] as usize);
    let config = BlockedConfig::new(map, origin, &blocked, mode)?;
    if (0..edge_id as usize).any(|e| !config.is_forward(2 * e)) {
        return Err(MobileError::Malformed("rebuilt orientation is not consistent".into()));
    }
    Ok(config)
}
