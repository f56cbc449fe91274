//! Brute-force enumeration of rotation systems.

use std::collections::HashSet;

use crate::par::Exec;
use crate::planar_map::{canonical_form, PlanarMap};

use super::OracleError;

/// Largest edge count accepted by the exhaustive enumerators over `sigma`.
pub const MAX_SIGMA_EDGES: usize = 5;

/// Rooted maps with a fixed number of edges, one representative per class (rooted at dart 0).
#[derive(Clone, Debug)]
pub struct RootedMaps {
    pub edges: usize,
    /// number of valid labelled rotation systems
    pub labeled: u64,
    pub maps: Vec<PlanarMap>,
}

impl RootedMaps {
    pub fn rooted(&self) -> usize {
        self.maps.len()
    }
}

/// Visits every permutation of `rest` (in place), calling `f` on each.
pub(crate) fn for_each_permutation<F: FnMut(&[u32])>(rest: &mut Vec<u32>, f: &mut F) {
    fn rec<F: FnMut(&[u32])>(a: &mut Vec<u32>, k: usize, f: &mut F) {
        if k == a.len() {
            f(a);
            return;
        }
        for i in k..a.len() {
            a.swap(k, i);
            rec(a, k + 1, f);
            a.swap(k, i);
        }
    }
    rec(rest, 0, f)
}

/// Number of cycles of `p`, or `None` when some cycle has odd length and `even` is set.
pub(crate) fn cycle_count(p: &[u32], even: bool, seen: &mut [bool]) -> Option<usize> {
    seen.iter_mut().for_each(|s| *s = false);
    let mut count = 0;
    for d in 0..p.len() {
        if seen[d] {
            continue;
        }
        count += 1;
        let mut len = 0;
        let mut x = d;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = p[x] as usize;
        }
        if even && len % 2 == 1 {
            return None;
        }
    }
    Some(count)
}

/// Connected genus-0 test on raw permutations.
pub(crate) fn is_planar_connected(alpha: &[u32], sigma: &[u32], seen: &mut [bool], stack: &mut Vec<usize>) -> bool {
    let n = alpha.len();
    let mut phi = vec![0u32; n];
    for d in 0..n {
        phi[d] = sigma[alpha[d] as usize];
    }
    let v = cycle_count(sigma, false, seen).unwrap();
    let f = cycle_count(&phi, false, seen).unwrap();
    if v + f != n / 2 + 2 {
        return false;
    }
    seen.iter_mut().for_each(|s| *s = false);
    stack.clear();
    stack.push(0);
    seen[0] = true;
    let mut reached = 1;
    while let Some(d) = stack.pop() {
        for x in [alpha[d] as usize, sigma[d] as usize] {
            if !seen[x] {
                seen[x] = true;
                reached += 1;
                stack.push(x);
            }
        }
    }
    reached == n
}

/// All rooted planar maps with `edges` edges, by running over every `sigma` with the
/// standard pairing. With `eulerian` only even-valent maps are kept.
pub fn enumerate_rooted_maps(edges: usize, eulerian: bool, exec: Exec) -> Result<RootedMaps, OracleError> {
    if edges == 0 || edges > MAX_SIGMA_EDGES {
        return Err(OracleError::CapExceeded(edges));
    }
    let n = 2 * edges;
    let alpha: Vec<u32> = (0..n as u32).map(|d| d ^ 1).collect();
    let (labeled, forms) = exec.map_reduce(
        n,
        || (0u64, HashSet::new()),
        |first| {
            let mut count = 0u64;
            let mut forms: HashSet<Vec<u32>> = HashSet::new();
            let mut rest: Vec<u32> = (0..n as u32).filter(|&x| x != first as u32).collect();
            let mut sigma = vec![0u32; n];
            let mut seen = vec![false; n];
            let mut stack = Vec::new();
            for_each_permutation(&mut rest, &mut |r| {
                sigma[0] = first as u32;
                sigma[1..].copy_from_slice(r);
                if eulerian && cycle_count(&sigma, true, &mut seen).is_none() {
                    return;
                }
                if !is_planar_connected(&alpha, &sigma, &mut seen, &mut stack) {
                    return;
                }
                count += 1;
                let m = PlanarMap::from_sigma(sigma.clone()).expect("checked above");
                forms.insert(canonical_form(&m, 0).sigma);
            });
            (count, forms)
        },
        |(a, mut x), (b, y)| {
            x.extend(y);
            (a + b, x)
        },
    );
    let relabelings = (1..edges as u64).product::<u64>() << (edges - 1);
    if labeled % relabelings != 0 || labeled / relabelings != forms.len() as u64 {
        return Err(OracleError::NonDivisible(format!("{labeled} labelled systems for {} rooted classes with {relabelings} relabelings each", forms.len())));
    }
    let mut forms: Vec<Vec<u32>> = forms.into_iter().collect();
    forms.sort();
    let maps = forms.into_iter().map(|s| PlanarMap::from_sigma(s).expect("canonical forms are valid")).collect();
    Ok(RootedMaps { edges, labeled, maps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_edge_maps() {
        let r = enumerate_rooted_maps(1, false, Exec::Sequential).unwrap();
        assert_eq!(r.rooted(), 2);
        assert_eq!(r.labeled, 2);
    }

    #[test]
    fn small_counts() {
        // rooted planar maps with 2 edges: 9; Eulerian: 3
        assert_eq!(enumerate_rooted_maps(2, false, Exec::Sequential).unwrap().rooted(), 9);
        assert_eq!(enumerate_rooted_maps(2, true, Exec::Sequential).unwrap().rooted(), 3);
        assert_eq!(enumerate_rooted_maps(3, false, Exec::Sequential).unwrap().rooted(), 54);
    }

    #[test]
    fn cap() {
        assert!(matches!(enumerate_rooted_maps(6, true, Exec::Sequential), Err(OracleError::CapExceeded(6))));
    }
}
