use super::PlanarMap;

/// Breadth-first relabelling of a rooted map, with optional per-dart decorations.
///
/// The root gets label 0 and its partner label 1; darts are then processed in
/// label order and the first unlabelled `sigma` image receives the next pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub sigma: Vec<u32>,
    pub labels: Vec<u64>,
}

impl CanonicalForm {
    /// The relabelled rotation, 1-based.
    pub fn sigma_images(&self) -> Vec<u32> {
        self.sigma.iter().map(|&s| s + 1).collect()
    }
}

/// New label of every old dart, for a BFS from `root`.
fn bfs_labels(map: &PlanarMap, root: usize) -> Vec<u32> {
    let n = map.dart_count();
    let mut new_of = vec![u32::MAX; n];
    let mut old_of = Vec::with_capacity(n);
    let give = |d: usize, new_of: &mut Vec<u32>, old_of: &mut Vec<usize>| {
        new_of[d] = old_of.len() as u32;
        old_of.push(d);
        let a = map.alpha(d);
        new_of[a] = old_of.len() as u32;
        old_of.push(a);
    };
    give(root, &mut new_of, &mut old_of);
    let mut i = 0;
    while i < old_of.len() {
        let s = map.sigma(old_of[i]);
        if new_of[s] == u32::MAX {
            give(s, &mut new_of, &mut old_of);
        }
        i += 1;
    }
    new_of
}

pub fn canonical_form(map: &PlanarMap, root: usize) -> CanonicalForm {
    canonical_form_with(map, root, |_| 0)
}

pub fn canonical_form_with<F: Fn(usize) -> u64>(map: &PlanarMap, root: usize, label: F) -> CanonicalForm {
    let new_of = bfs_labels(map, root);
    let n = map.dart_count();
    let mut sigma = vec![0; n];
    let mut labels = vec![0; n];
    for d in 0..n {
        let k = new_of[d] as usize;
        sigma[k] = new_of[map.sigma(d)];
        labels[k] = label(d);
    }
    CanonicalForm { sigma, labels }
}

/// Relabels `map` with the standard pairing, starting from `root`.
/// Returns the new map and the new index of every old dart.
pub fn relabel_from(map: &PlanarMap, root: usize) -> (PlanarMap, Vec<u32>) {
    let form = canonical_form(map, root);
    let m = PlanarMap::from_sigma(form.sigma).expect("relabelling preserves validity");
    (m, bfs_labels(map, root))
}
