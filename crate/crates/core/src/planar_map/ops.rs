use super::{Bicoloring, Color, MapError, PlanarMap};

/// Vertices become faces and faces become vertices; `dual(dual(m)) == m`.
pub fn dual(map: &PlanarMap) -> PlanarMap {
    let n = map.dart_count();
    let alpha = map.alpha_slice().to_vec();
    let sigma = (0..n).map(|d| map.phi(d) as u32).collect();
    PlanarMap::build(alpha, sigma).expect("the dual of a planar map is planar")
}

/// Collapses every bivalent face of colour `color` into a single edge.
pub fn squeeze_bivalent(map: &PlanarMap, coloring: &Bicoloring, color: Color) -> Result<PlanarMap, MapError> {
    let n = map.dart_count();
    let mut removed = vec![false; n];
    let mut partner: Vec<u32> = map.alpha_slice().to_vec();
    for f in 0..map.face_count() {
        if coloring.color(f) != color {
            continue;
        }
        let darts = map.face_darts(f);
        if darts.len() != 2 {
            return Err(MapError::NotBivalent(f));
        }
        let (a, b) = (darts[0] as usize, darts[1] as usize);
        removed[a] = true;
        removed[b] = true;
        let (x, y) = (map.alpha(a), map.alpha(b));
        partner[x] = y as u32;
        partner[y] = x as u32;
    }
    let mut new_index = vec![u32::MAX; n];
    let mut kept = 0u32;
    for d in 0..n {
        if !removed[d] {
            new_index[d] = kept;
            kept += 1;
        }
    }
    if kept == 0 {
        return Err(MapError::BadDartCount(0));
    }
    let mut alpha = vec![0; kept as usize];
    let mut sigma = vec![0; kept as usize];
    for d in 0..n {
        if removed[d] {
            continue;
        }
        let mut s = map.sigma(d);
        while removed[s] {
            s = map.sigma(s);
        }
        alpha[new_index[d] as usize] = new_index[partner[d] as usize];
        sigma[new_index[d] as usize] = new_index[s];
    }
    PlanarMap::build(alpha, sigma)
}
