use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::canonical::{canonical_form_with, CanonicalForm};
use super::{bicolor_faces, Bicoloring, MapError, PlanarMap};

/// How blockings are counted: each edge on its own, or both edges of a bivalent
/// black face together (one undirected edge of the squeezed map).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockMode {
    Directed,
    Pairs,
    None,
}

/// A pointed Eulerian map together with a set of blocked edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedConfig {
    map: PlanarMap,
    coloring: Bicoloring,
    swapped: bool,
    origin: usize,
    blocked: Vec<bool>,
    mode: BlockMode,
}

impl BlockedConfig {
    pub fn new(map: PlanarMap, origin: usize, blocked: &[usize], mode: BlockMode) -> Result<BlockedConfig, MapError> {
        let coloring = bicolor_faces(&map)?;
        if origin >= map.vertex_count() {
            return Err(MapError::BadOrigin(origin));
        }
        let mut flags = vec![false; map.edge_count()];
        for &e in blocked {
            if e >= flags.len() {
                return Err(MapError::BadEdge(e));
            }
            flags[e] = true;
        }
        Ok(BlockedConfig { map, coloring, swapped: false, origin, blocked: flags, mode })
    }

    /// The same configuration with black and white exchanged (every edge reversed).
    pub fn with_swapped_colors(mut self) -> BlockedConfig {
        self.coloring = self.coloring.swapped();
        self.swapped = !self.swapped;
        self
    }

    pub fn with_blocked_flags(&self, blocked: Vec<bool>) -> BlockedConfig {
        assert_eq!(blocked.len(), self.map.edge_count());
        BlockedConfig { blocked, ..self.clone() }
    }

    pub fn map(&self) -> &PlanarMap {
        &self.map
    }
    pub fn coloring(&self) -> &Bicoloring {
        &self.coloring
    }
    pub fn colors_swapped(&self) -> bool {
        self.swapped
    }
    pub fn origin(&self) -> usize {
        self.origin
    }
    pub fn mode(&self) -> BlockMode {
        self.mode
    }
    pub fn is_blocked(&self, e: usize) -> bool {
        self.blocked[e]
    }
    pub fn blocked_flags(&self) -> &[bool] {
        &self.blocked
    }
    pub fn blocked_edges(&self) -> Vec<usize> {
        (0..self.blocked.len()).filter(|&e| self.blocked[e]).collect()
    }
    pub fn blocked_count(&self) -> usize {
        self.blocked.iter().filter(|&&b| b).count()
    }
    pub fn is_forward(&self, d: usize) -> bool {
        self.coloring.is_forward(&self.map, d)
    }
    pub fn forward_dart(&self, e: usize) -> usize {
        self.coloring.forward_dart(&self.map, e)
    }

    /// Isomorphism invariant of the pointed decorated map.
    pub fn canonical_key(&self) -> CanonicalForm {
        let m = &self.map;
        let label = |d: usize| -> u64 { (self.is_forward(d) as u64) | ((self.blocked[m.edge(d)] as u64) << 1) | (((m.vertex(d) == self.origin) as u64) << 2) };
        m.vertex_darts(self.origin).iter().map(|&r| canonical_form_with(m, r as usize, label)).min().expect("vertices have at least one dart")
    }
}

/// Oriented distances from the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceLabeling {
    pub dist: Vec<u32>,
}

impl DistanceLabeling {
    pub fn max(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }
}

/// Breadth-first distances along non-blocked forward darts.
pub fn distances(config: &BlockedConfig) -> Result<DistanceLabeling, MapError> {
    distances_with(config.map(), config.coloring(), config.origin(), config.blocked_flags())
}

/// As [`distances`], for a blocked set given per edge without building a configuration.
pub fn distances_with(m: &PlanarMap, coloring: &Bicoloring, origin: usize, blocked: &[bool]) -> Result<DistanceLabeling, MapError> {
    let mut dist = vec![u32::MAX; m.vertex_count()];
    dist[origin] = 0;
    let mut queue = VecDeque::from([origin]);
    while let Some(v) = queue.pop_front() {
        for &d in m.vertex_darts(v) {
            let d = d as usize;
            if !coloring.is_forward(m, d) || blocked[m.edge(d)] {
                continue;
            }
            let w = m.head(d);
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    match dist.iter().position(|&x| x == u32::MAX) {
        Some(v) => Err(MapError::Unreachable(v)),
        None => Ok(DistanceLabeling { dist }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockingReport {
    pub valid: bool,
    pub witness: Option<MapError>,
    pub dual_forest: bool,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn dual_acyclic(config: &BlockedConfig) -> bool {
    let m = config.map();
    let mut parent: Vec<usize> = (0..m.face_count()).collect();
    for e in config.blocked_edges() {
        let [a, b] = m.edge_darts(e);
        let (x, y) = (find(&mut parent, m.face(a)), find(&mut parent, m.face(b)));
        if x == y {
            return false;
        }
        parent[x] = y;
    }
    true
}

fn mode_witness(config: &BlockedConfig) -> Option<MapError> {
    let m = config.map();
    match config.mode() {
        BlockMode::Directed => None,
        BlockMode::None => config.blocked_edges().first().map(|&e| MapError::PairMismatch(m.face(e))),
        BlockMode::Pairs => {
            for e in config.blocked_edges() {
                let f = m.face(config.forward_dart(e));
                let darts = m.face_darts(f);
                if darts.len() != 2 || darts.iter().any(|&d| !config.is_blocked(m.edge(d as usize))) {
                    return Some(MapError::PairMismatch(f));
                }
            }
            None
        }
    }
}

/// Checks the mode rules, the connectivity constraint and the dual forest property.
pub fn validate_blocking(config: &BlockedConfig) -> BlockingReport {
    let dual_forest = dual_acyclic(config);
    let witness = mode_witness(config).or_else(|| distances(config).err());
    let witness = match witness {
        None if !dual_forest => Some(MapError::DualCycle),
        w => w,
    };
    BlockingReport { valid: witness.is_none(), witness, dual_forest }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_map() -> PlanarMap {
        PlanarMap::from_sigma(vec![1, 0]).unwrap()
    }

    #[test]
    fn single_loop_blockings() {
        let c = BlockedConfig::new(loop_map(), 0, &[], BlockMode::Directed).unwrap();
        assert_eq!(distances(&c).unwrap().dist, vec![0]);
        // the loop can be blocked, the vertex is still the origin
        let b = BlockedConfig::new(loop_map(), 0, &[0], BlockMode::Directed).unwrap();
        assert!(validate_blocking(&b).valid);
    }

    #[test]
    fn bivalent_face_cut_off() {
        // two vertices joined by two edges: one black and one white bivalent face
        let m = PlanarMap::from_sigma(vec![2, 3, 0, 1]).unwrap();
        assert_eq!((m.vertex_count(), m.face_count()), (2, 2));
        let c = BlockedConfig::new(m.clone(), 0, &[0], BlockMode::Directed).unwrap();
        let forward_out = (0..4).filter(|&d| m.vertex(d) == 0 && c.is_forward(d)).count();
        assert_eq!(forward_out, 1);
        let all = BlockedConfig::new(m.clone(), 0, &[0, 1], BlockMode::Directed).unwrap();
        let r = validate_blocking(&all);
        assert!(!r.valid);
        assert!(!r.dual_forest);
        let pairs = BlockedConfig::new(m, 0, &[0], BlockMode::Pairs).unwrap();
        assert!(matches!(validate_blocking(&pairs).witness, Some(MapError::PairMismatch(_))));
    }
}
