//! Rotation-system representation of a connected planar map.

use super::MapError;

/// A map given by a fixed-point-free involution `alpha` (edges) and a
/// permutation `sigma` (counterclockwise rotation around vertices).
///
/// Faces are the orbits of `phi = sigma . alpha`; `face(d)` is the face lying to
/// the right of dart `d`, and its orbit runs clockwise around that face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarMap {
    alpha: Vec<u32>,
    sigma: Vec<u32>,
    sigma_inv: Vec<u32>,
    vertex_of: Vec<u32>,
    vertices: Vec<Vec<u32>>,
    face_of: Vec<u32>,
    faces: Vec<Vec<u32>>,
    edge_of: Vec<u32>,
    edges: Vec<[u32; 2]>,
}

fn check_permutation(p: &[u32], n: usize) -> Result<(), MapError> {
    let mut seen = vec![false; n];
    for &x in p {
        let x = x as usize;
        if x >= n || seen[x] {
            return Err(MapError::NotPermutation);
        }
        seen[x] = true;
    }
    Ok(())
}

/// Orbits of a permutation, each starting at its smallest element, ordered by that element.
fn orbits(p: &[u32]) -> (Vec<u32>, Vec<Vec<u32>>) {
    let mut of = vec![u32::MAX; p.len()];
    let mut list = Vec::new();
    for d in 0..p.len() {
        if of[d] != u32::MAX {
            continue;
        }
        let id = list.len() as u32;
        let mut orbit = Vec::new();
        let mut x = d;
        while of[x] == u32::MAX {
            of[x] = id;
            orbit.push(x as u32);
            x = p[x] as usize;
        }
        list.push(orbit);
    }
    (of, list)
}

impl PlanarMap {
    /// Validates and builds a map from 0-based `alpha` and `sigma`.
    pub fn build(alpha: Vec<u32>, sigma: Vec<u32>) -> Result<PlanarMap, MapError> {
        let n = alpha.len();
        if n == 0 || n % 2 == 1 || sigma.len() != n {
            return Err(MapError::BadDartCount(n));
        }
        check_permutation(&alpha, n)?;
        check_permutation(&sigma, n)?;
        for d in 0..n {
            let a = alpha[d] as usize;
            if a == d || alpha[a] as usize != d {
                return Err(MapError::NotInvolution);
            }
        }
        let m = PlanarMap::assemble(alpha, sigma);
        if !m.is_connected() {
            return Err(MapError::NotConnected);
        }
        let (v, e, f) = (m.vertex_count(), m.edge_count(), m.face_count());
        if v + f != e + 2 {
            return Err(MapError::NonPlanar { v, e, f });
        }
        Ok(m)
    }

    /// Builds with the standard pairing `(0 1)(2 3)...`.
    pub fn from_sigma(sigma: Vec<u32>) -> Result<PlanarMap, MapError> {
        let alpha = (0..sigma.len() as u32).map(|d| d ^ 1).collect();
        PlanarMap::build(alpha, sigma)
    }

    fn assemble(alpha: Vec<u32>, sigma: Vec<u32>) -> PlanarMap {
        let n = alpha.len();
        let mut sigma_inv = vec![0; n];
        for (d, &s) in sigma.iter().enumerate() {
            sigma_inv[s as usize] = d as u32;
        }
        let phi: Vec<u32> = (0..n).map(|d| sigma[alpha[d] as usize]).collect();
        let (vertex_of, vertices) = orbits(&sigma);
        let (face_of, faces) = orbits(&phi);
        let mut edge_of = vec![0; n];
        let mut edges = Vec::with_capacity(n / 2);
        for d in 0..n {
            let a = alpha[d] as usize;
            if d < a {
                edge_of[d] = edges.len() as u32;
                edge_of[a] = edges.len() as u32;
                edges.push([d as u32, a as u32]);
            }
        }
        PlanarMap { alpha, sigma, sigma_inv, vertex_of, vertices, face_of, faces, edge_of, edges }
    }

    fn is_connected(&self) -> bool {
        let n = self.dart_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for x in [self.alpha[d] as usize, self.sigma[d] as usize, self.sigma_inv[d] as usize] {
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                    stack.push(x);
                }
            }
        }
        count == n
    }

    pub fn dart_count(&self) -> usize {
        self.alpha.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
    pub fn alpha(&self, d: usize) -> usize {
        self.alpha[d] as usize
    }
    pub fn sigma(&self, d: usize) -> usize {
        self.sigma[d] as usize
    }
    pub fn sigma_inv(&self, d: usize) -> usize {
        self.sigma_inv[d] as usize
    }
    /// Next dart clockwise around the face on the right of `d`.
    pub fn phi(&self, d: usize) -> usize {
        self.sigma[self.alpha[d] as usize] as usize
    }
    pub fn phi_inv(&self, d: usize) -> usize {
        self.alpha[self.sigma_inv[d] as usize] as usize
    }
    /// Vertex at the tail of `d`.
    pub fn vertex(&self, d: usize) -> usize {
        self.vertex_of[d] as usize
    }
    /// Vertex at the head of `d`.
    pub fn head(&self, d: usize) -> usize {
        self.vertex_of[self.alpha[d] as usize] as usize
    }
    /// Face on the right of `d`.
    pub fn face(&self, d: usize) -> usize {
        self.face_of[d] as usize
    }
    pub fn edge(&self, d: usize) -> usize {
        self.edge_of[d] as usize
    }
    /// Darts around vertex `v` in counterclockwise order.
    pub fn vertex_darts(&self, v: usize) -> &[u32] {
        &self.vertices[v]
    }
    /// Darts with face `f` on their right, clockwise around `f`.
    pub fn face_darts(&self, f: usize) -> &[u32] {
        &self.faces[f]
    }
    pub fn edge_darts(&self, e: usize) -> [usize; 2] {
        [self.edges[e][0] as usize, self.edges[e][1] as usize]
    }
    pub fn valence(&self, v: usize) -> usize {
        self.vertices[v].len()
    }
    pub fn face_valence(&self, f: usize) -> usize {
        self.faces[f].len()
    }
    pub fn alpha_slice(&self) -> &[u32] {
        &self.alpha
    }
    pub fn sigma_slice(&self) -> &[u32] {
        &self.sigma
    }
    pub fn has_standard_alpha(&self) -> bool {
        self.alpha.iter().enumerate().all(|(d, &a)| a as usize == d ^ 1)
    }
    pub fn all_valences_even(&self) -> bool {
        self.vertices.iter().all(|o| o.len() % 2 == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_and_loop() {
        let m = PlanarMap::from_sigma(vec![0, 1]).unwrap();
        assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (2, 1, 1));
        let l = PlanarMap::from_sigma(vec![1, 0]).unwrap();
        assert_eq!((l.vertex_count(), l.edge_count(), l.face_count()), (1, 1, 2));
    }

    #[test]
    fn rejections() {
        assert_eq!(PlanarMap::build(vec![0, 1], vec![0, 1]), Err(MapError::NotInvolution));
        assert_eq!(PlanarMap::from_sigma(vec![0, 0]), Err(MapError::NotPermutation));
        // two disjoint edges
        assert_eq!(PlanarMap::from_sigma(vec![0, 1, 2, 3]), Err(MapError::NotConnected));
        // one vertex, two edges interleaved: the torus
        assert!(matches!(PlanarMap::from_sigma(vec![2, 3, 1, 0]), Err(MapError::NonPlanar { .. })));
    }
}
