use serde::{Deserialize, Serialize};

use super::{MapError, PlanarMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// Proper two-colouring of the faces of an Eulerian planar map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicoloring {
    black: Vec<bool>,
}

impl Bicoloring {
    pub fn color(&self, face: usize) -> Color {
        if self.black[face] {
            Color::Black
        } else {
            Color::White
        }
    }

    pub fn is_black(&self, face: usize) -> bool {
        self.black[face]
    }

    pub fn swapped(&self) -> Bicoloring {
        Bicoloring { black: self.black.iter().map(|b| !b).collect() }
    }

    pub fn count(&self, c: Color) -> usize {
        self.black.iter().filter(|&&b| b == (c == Color::Black)).count()
    }

    /// A dart is forward when the black face lies on its right.
    pub fn is_forward(&self, map: &PlanarMap, d: usize) -> bool {
        self.black[map.face(d)]
    }

    /// The forward dart of edge `e`.
    pub fn forward_dart(&self, map: &PlanarMap, e: usize) -> usize {
        let [a, b] = map.edge_darts(e);
        if self.is_forward(map, a) {
            a
        } else {
            b
        }
    }
}

/// Colours the face to the right of dart 0 black and propagates across edges.
pub fn bicolor_faces(map: &PlanarMap) -> Result<Bicoloring, MapError> {
    for v in 0..map.vertex_count() {
        if map.valence(v) % 2 == 1 {
            return Err(MapError::NotEulerian(v));
        }
    }
    let f = map.face_count();
    let mut col: Vec<Option<bool>> = vec![None; f];
    col[map.face(0)] = Some(true);
    let mut stack = vec![map.face(0)];
    while let Some(face) = stack.pop() {
        let c = col[face].unwrap();
        for &d in map.face_darts(face) {
            let other = map.face(map.alpha(d as usize));
            match col[other] {
                None => {
                    col[other] = Some(!c);
                    stack.push(other);
                }
                Some(oc) if oc == c => return Err(MapError::NotEulerian(map.vertex(d as usize))),
                _ => {}
            }
        }
    }
    Ok(Bicoloring { black: col.into_iter().map(|c| c.unwrap_or(true)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_map_has_one_face_of_each_colour() {
        let m = PlanarMap::from_sigma(vec![1, 0]).unwrap();
        let c = bicolor_faces(&m).unwrap();
        assert_eq!(c.count(Color::Black), 1);
        assert!(c.is_forward(&m, 0));
        assert!(!c.is_forward(&m, 1));
    }

    #[test]
    fn odd_vertex_rejected() {
        let m = PlanarMap::from_sigma(vec![0, 1]).unwrap();
        assert!(matches!(bicolor_faces(&m), Err(MapError::NotEulerian(_))));
    }
}
