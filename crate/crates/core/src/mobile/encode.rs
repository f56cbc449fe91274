use crate::planar_map::{distances, validate_blocking, BlockedConfig, Color};

use super::types::{EdgeKind, Mobile, Node};
use super::MobileError;

/// Encodes a pointed Eulerian map with blocked edges as a well-labeled mobile.
///
/// Node ids: faces first (in face order), then the vertices other than the origin.
pub fn to_mobile(config: &BlockedConfig) -> Result<Mobile, MobileError> {
    let m = config.map();
    if m.vertex_count() == 1 {
        return Err(MobileError::DegenerateMap);
    }
    let report = validate_blocking(config);
    if let Some(w) = report.witness {
        return Err(w.into());
    }
    let dist = distances(config)?.dist;
    let mut mob = Mobile::new();
    for f in 0..m.face_count() {
        mob.add_node(match config.coloring().color(f) {
            Color::Black => Node::Black,
            Color::White => Node::White,
        });
    }
    let mut vnode = vec![usize::MAX; m.vertex_count()];
    for (v, slot) in vnode.iter_mut().enumerate() {
        if v != config.origin() {
            *slot = mob.add_node(Node::Labeled(dist[v] as i64));
        }
    }
    // one mobile edge per map edge
    let mut medge = vec![usize::MAX; m.edge_count()];
    let mut is_iii = vec![false; m.edge_count()];
    for (e, slot) in medge.iter_mut().enumerate() {
        let d = config.forward_dart(e);
        let (u, v) = (m.vertex(d), m.head(d));
        let (white, black) = (m.face(m.alpha(d)), m.face(d));
        let (du, dv) = (dist[u] as i64, dist[v] as i64);
        *slot = if config.is_blocked(e) || dv <= du {
            mob.push_edge(white, black, EdgeKind::Flagged { marked: config.is_blocked(e), flag_left: dv, flag_right: du })
        } else {
            debug_assert_eq!(dv, du + 1);
            is_iii[e] = true;
            mob.push_edge(white, vnode[v], EdgeKind::Iii)
        };
    }
    for f in 0..m.face_count() {
        let black = config.coloring().is_black(f);
        let rot = m.face_darts(f).iter().map(|&d| m.edge(d as usize)).filter(|&e| !black || !is_iii[e]).map(|e| medge[e]).collect();
        mob.set_rotation(f, rot);
    }
    for v in 0..m.vertex_count() {
        if v == config.origin() {
            continue;
        }
        // clockwise around v; an edge into v of type (iii) sits in the corner
        // just clockwise after its reverse dart
        let first = m.vertex_darts(v)[0] as usize;
        let mut rot = Vec::new();
        let mut d = first;
        loop {
            let e = m.edge(d);
            if is_iii[e] && config.is_forward(m.alpha(d)) {
                rot.push(medge[e]);
            }
            d = m.sigma_inv(d);
            if d == first {
                break;
            }
        }
        mob.set_rotation(vnode[v], rot);
    }
    Ok(mob)
}
