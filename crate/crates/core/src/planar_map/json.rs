use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{relabel_from, BlockMode, BlockedConfig, MapError, PlanarMap};

/// File form of a pointed map with blocked edges; darts and vertices are 1-based and
/// the pairing is implicitly `(1 2)(3 4)...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub darts: usize,
    pub sigma: Vec<u32>,
    #[serde(default)]
    pub blocked_darts: Vec<u32>,
    pub origin_vertex: usize,
    pub mode: BlockMode,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub swap_colors: bool,
}

#[derive(Debug, Error)]
pub enum MapJsonError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("{0}")]
    Invalid(String),
}

impl MapJson {
    pub fn from_config(config: &BlockedConfig) -> MapJson {
        let m = config.map();
        let (std_map, new_of) = if m.has_standard_alpha() { (m.clone(), (0..m.dart_count() as u32).collect()) } else { relabel_from(m, 0) };
        let mut blocked: Vec<u32> = config.blocked_edges().into_iter().map(|e| new_of[config.forward_dart(e)] + 1).collect();
        blocked.sort_unstable();
        let origin_dart = new_of[m.vertex_darts(config.origin())[0] as usize] as usize;
        MapJson {
            darts: std_map.dart_count(),
            sigma: std_map.sigma_slice().iter().map(|s| s + 1).collect(),
            blocked_darts: blocked,
            origin_vertex: std_map.vertex(origin_dart) + 1,
            mode: config.mode(),
            swap_colors: config.colors_swapped(),
        }
    }

    pub fn to_config(&self) -> Result<BlockedConfig, MapJsonError> {
        if self.sigma.len() != self.darts {
            return Err(MapJsonError::Invalid(format!("sigma has {} entries for {} darts", self.sigma.len(), self.darts)));
        }
        if self.sigma.contains(&0) {
            return Err(MapJsonError::Invalid("darts are numbered from 1".into()));
        }
        let map = PlanarMap::from_sigma(self.sigma.iter().map(|s| s - 1).collect())?;
        if self.origin_vertex == 0 || self.origin_vertex > map.vertex_count() {
            return Err(MapError::BadOrigin(self.origin_vertex).into());
        }
        let mut edges = Vec::new();
        for &d in &self.blocked_darts {
            if d == 0 || d as usize > map.dart_count() {
                return Err(MapJsonError::Invalid(format!("blocked dart {d} out of range")));
            }
            edges.push(map.edge(d as usize - 1));
        }
        let config = BlockedConfig::new(map, self.origin_vertex - 1, &edges, self.mode)?;
        let config = if self.swap_colors { config.with_swapped_colors() } else { config };
        for &d in &self.blocked_darts {
            if !config.is_forward(d as usize - 1) {
                return Err(MapJsonError::Invalid(format!("blocked dart {d} is not the forward dart of its edge")));
            }
        }
        Ok(config)
    }

    pub fn parse(s: &str) -> Result<BlockedConfig, MapJsonError> {
        serde_json::from_str::<MapJson>(s)?.to_config()
    }
}
