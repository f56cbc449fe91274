use mobile_atlas::mobile::{check_well_labeled, contour_word, from_mobile, to_mobile, EdgeKind, MobileError};
use mobile_atlas::oracle::enumerate_rooted_maps;
use mobile_atlas::par::Exec;
use mobile_atlas::planar_map::{distances, validate_blocking, BlockMode, BlockedConfig, PlanarMap};

/// Every valid blocked set of a pointed map in the given mode.
fn blockings(map: &PlanarMap, origin: usize, mode: BlockMode) -> Vec<BlockedConfig> {
    let base = BlockedConfig::new(map.clone(), origin, &[], mode).unwrap();
    let e = map.edge_count();
    let mut out = Vec::new();
    for mask in 0u32..(1 << e) {
        let flags: Vec<bool> = (0..e).map(|i| mask >> i & 1 == 1).collect();
        let c = base.with_blocked_flags(flags);
        if validate_blocking(&c).valid {
            out.push(c);
        }
    }
    out
}

fn check_config(c: &BlockedConfig) {
    let mob = to_mobile(c).unwrap();
    let m = c.map();
    assert_eq!(mob.node_count(), m.face_count() + m.vertex_count() - 1);
    assert_eq!(mob.edge_count(), m.edge_count());
    assert_eq!(mob.marked_count(), c.blocked_count());
    let report = check_well_labeled(&mob);
    assert!(report.is_ok(), "{:?} for {:?}", report, m.sigma_slice());
    let word = contour_word(&mob).unwrap();
    let flagged = mob.edges().iter().filter(|e| e.kind.is_flagged()).count();
    assert_eq!(word.len(), mob.edge_count() - flagged + 2 * flagged);
    let back = from_mobile(&mob).unwrap();
    assert_eq!(back.canonical_key(), c.canonical_key(), "round trip failed for {:?} origin {} blocked {:?}", m.sigma_slice(), c.origin(), c.blocked_edges());
    // labels are the distances of the rebuilt map
    let d = distances(&back).unwrap();
    let again = to_mobile(&back).unwrap();
    assert_eq!(again.min_label(), mob.min_label());
    assert!(d.max() as i64 >= 1);
}

fn round_trip_all(max_edges: usize, mode: BlockMode) -> usize {
    let mut checked = 0;
    for edges in 1..=max_edges {
        let maps = enumerate_rooted_maps(edges, true, Exec::default()).unwrap();
        for m in &maps.maps {
            for origin in 0..m.vertex_count() {
                for c in blockings(m, origin, mode) {
                    if m.vertex_count() == 1 {
                        assert_eq!(to_mobile(&c), Err(MobileError::DegenerateMap));
                        continue;
                    }
                    check_config(&c);
                    checked += 1;
                }
            }
        }
    }
    checked
}

#[test]
fn round_trip_directed() {
    let n = round_trip_all(4, BlockMode::Directed);
    assert_eq!(n, 682);
}

#[test]
fn round_trip_pairs() {
    let n = round_trip_all(4, BlockMode::Pairs);
    assert_eq!(n, 127);
}

#[test]
fn no_blockings_means_no_marks() {
    let maps = enumerate_rooted_maps(3, true, Exec::default()).unwrap();
    for m in maps.maps.iter().filter(|m| m.vertex_count() > 1) {
        let c = BlockedConfig::new(m.clone(), 0, &[], BlockMode::Directed).unwrap();
        let mob = to_mobile(&c).unwrap();
        assert!(mob.edges().iter().all(|e| !matches!(e.kind, EdgeKind::Flagged { marked: true, .. })));
    }
}
