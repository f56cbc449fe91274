//! Enumeration of Eulerian maps with a prescribed multiset of coloured faces.
//!
//! The face permutation `phi` is fixed with one cycle per face (black faces first,
//! so that dart 0 sees a black face on its right); every edge pairs a dart of a black
//! face with a dart of a white face, so `alpha` runs over all such matchings and
//! `sigma = phi . alpha`. Each decorated map with a distinguished oriented edge is
//! then produced exactly `|C|` times, `C` being the colour-preserving centralizer of `phi`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::par::Exec;
use crate::planar_map::{Color, PlanarMap};

use super::maps::{for_each_permutation, is_planar_connected};
use super::OracleError;

/// Largest edge count accepted by the face-profile enumerator (`E!` matchings).
pub const MAX_PROFILE_EDGES: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceProfile {
    faces: Vec<(Color, usize)>,
}

impl FaceProfile {
    pub fn new(mut faces: Vec<(Color, usize)>) -> FaceProfile {
        faces.sort_by_key(|&(c, k)| (c != Color::Black, k));
        FaceProfile { faces }
    }

    /// `white[k]` white and `black[k]` black faces of valence `k`.
    pub fn from_counts(white: &[(usize, usize)], black: &[(usize, usize)]) -> FaceProfile {
        let mut faces = Vec::new();
        for &(k, m) in black {
            faces.extend(std::iter::repeat_n((Color::Black, k), m));
        }
        for &(k, m) in white {
            faces.extend(std::iter::repeat_n((Color::White, k), m));
        }
        FaceProfile::new(faces)
    }

    pub fn faces(&self) -> &[(Color, usize)] {
        &self.faces
    }

    fn valence_sum(&self, c: Color) -> usize {
        self.faces.iter().filter(|f| f.0 == c).map(|f| f.1).sum()
    }

    /// Edge count, or `None` if black and white valences do not balance.
    pub fn edges(&self) -> Option<usize> {
        let b = self.valence_sum(Color::Black);
        (b == self.valence_sum(Color::White) && b > 0).then_some(b)
    }

    /// Order of the colour-preserving centralizer of `phi`.
    pub fn centralizer_order(&self) -> BigInt {
        let mut groups: BTreeMap<(bool, usize), u32> = BTreeMap::new();
        for &(c, k) in &self.faces {
            *groups.entry((c == Color::Black, k)).or_default() += 1;
        }
        let mut out = BigInt::from(1);
        for ((_, k), m) in groups {
            out *= BigInt::from(k).pow(m);
            for i in 1..=m {
                out *= i;
            }
        }
        out
    }

    /// `phi` and the darts of black and white faces.
    fn phi(&self) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
        let mut phi = Vec::new();
        let (mut black, mut white) = (Vec::new(), Vec::new());
        for &(c, k) in &self.faces {
            let start = phi.len() as u32;
            for i in 0..k as u32 {
                phi.push(start + (i + 1) % k as u32);
                if c == Color::Black {
                    black.push(start + i);
                } else {
                    white.push(start + i);
                }
            }
        }
        (phi, black, white)
    }

    /// Folds `f` over every connected planar map with this face profile, one per
    /// matching of black darts to white darts.
    pub fn fold_maps<R, F, G>(&self, exec: Exec, identity: impl Fn() -> R + Sync + Send, f: F, reduce: G) -> Result<R, OracleError>
    where
        R: Send,
        F: Fn(R, &PlanarMap) -> R + Sync + Send,
        G: Fn(R, R) -> R + Sync + Send,
    {
        let e = self.edges().ok_or_else(|| OracleError::Unbalanced(format!("{:?}", self.faces)))?;
        if e > MAX_PROFILE_EDGES {
            return Err(OracleError::CapExceeded(e));
        }
        let (phi, black, white) = self.phi();
        let n = 2 * e;
        Ok(exec.map_reduce(
            e,
            &identity,
            |first| {
                let mut acc = identity();
                let mut rest: Vec<u32> = (0..e as u32).filter(|&x| x != first as u32).collect();
                let mut alpha = vec![0u32; n];
                let mut sigma = vec![0u32; n];
                let mut seen = vec![false; n];
                let mut stack = Vec::new();
                for_each_permutation(&mut rest, &mut |r| {
                    for i in 0..e {
                        let w = white[if i == 0 { first } else { r[i - 1] as usize }];
                        alpha[black[i] as usize] = w;
                        alpha[w as usize] = black[i];
                    }
                    for d in 0..n {
                        sigma[d] = phi[alpha[d] as usize];
                    }
                    if !is_planar_connected(&alpha, &sigma, &mut seen, &mut stack) {
                        return;
                    }
                    let m = PlanarMap::build(alpha.clone(), sigma.clone()).expect("checked above");
                    let prev = std::mem::replace(&mut acc, identity());
                    acc = f(prev, &m);
                });
                acc
            },
            reduce,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_quadrangle_pair() {
        // a white and a black 2-gon: the digon, realised by one matching out of 2
        let p = FaceProfile::from_counts(&[(2, 1)], &[(2, 1)]);
        let n = p.fold_maps(Exec::Sequential, || 0u32, |a, _| a + 1, |a, b| a + b).unwrap();
        assert_eq!(n, 2);
        assert_eq!(p.centralizer_order(), BigInt::from(4));
    }
}
