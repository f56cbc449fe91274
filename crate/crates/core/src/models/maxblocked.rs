//! Maximally blocked Eulerian maps: bicoloured trees with balanced leaves.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::planar_map::{dual, validate_blocking, BlockMode, BlockedConfig, Color, PlanarMap};
use crate::series::{AuxPoly, Expr, GSeries, Proj, System, Var, ZLaurent};

use super::ModelError;

/// `Z` and the two tree series, graded by the number of nodes.
#[derive(Clone, Debug)]
pub struct MaxBlocked {
    pub order: usize,
    pub z: GSeries,
    pub q_white: ZLaurent,
    pub q_black: ZLaurent,
}

impl MaxBlocked {
    /// `Z` with the node grading dropped, regraded by `v`.
    pub fn z_in(&self, v: &str) -> GSeries {
        GSeries::regrade(&self.z.flatten(), Var::new(v), self.order)
    }
}

/// Solves the tree system for node weights `alpha` (white) and `alpha_t` (black).
pub fn max_blocked(alpha: &[(usize, AuxPoly)], alpha_t: &[(usize, AuxPoly)], order: usize) -> Result<MaxBlocked, ModelError> {
    if alpha.iter().chain(alpha_t).any(|(k, _)| *k == 0) {
        return Err(ModelError::InvalidSpec("node valence must be positive".into()));
    }
    let mut s = System::new();
    let qw = s.unknown("Qw");
    let qb = s.unknown("Qb");
    let z = s.unknown("Z");
    let node_sum = |w: &[(usize, AuxPoly)], x: usize| -> Vec<Expr> {
        w.iter().map(|(k, a)| Expr::prod(vec![Expr::weight(a.clone(), 1, 0, order), Expr::var(x).pow(*k as u32 - 1)])).collect()
    };
    let mut white = vec![Expr::z(-1, order)];
    white.extend(node_sum(alpha_t, qb));
    let mut black = vec![Expr::z(1, order)];
    black.extend(node_sum(alpha, qw));
    s.define(qw, Expr::sum(white));
    s.define(qb, Expr::sum(black));
    let zt: Vec<Expr> = node_sum(alpha, qw).into_iter().map(|e| e.project(Proj::Coeff(1))).collect();
    s.define(z, Expr::sum(zt));
    let kmax = alpha.iter().chain(alpha_t).map(|(k, _)| *k).max().unwrap_or(2).max(2) as i32;
    let w = (kmax - 1) * order as i32 + 1;
    s.set_window(qw, -w, w);
    s.set_window(qb, -w, w);
    let sol = s.solve(order)?;
    s.verify(&sol)?;
    let q_black = sol.get("Qb").clone();
    let zs = sol.scalar("Z");
    // the same series read as trees with a distinguished white leaf
    let alt = q_black.project(Proj::Coeff(1)).coeff(0).sub(&GSeries::one(order));
    if alt != zs {
        return Err(ModelError::IdentityFailed("Z = [Qb/z - 1]_0".into()));
    }
    Ok(MaxBlocked { order, z: zs, q_white: sol.get("Qw").clone(), q_black })
}

/// A plane tree with alternately coloured nodes and leaves hanging off them.
///
/// `items` lists what surrounds the node in clockwise order; for a non-root node the
/// list starts right after the edge to its parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafTree {
    pub color: Color,
    pub items: Vec<LeafItem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafItem {
    Leaf,
    Node(LeafTree),
}

impl LeafTree {
    pub fn node_count(&self) -> usize {
        1 + self.children().map(LeafTree::node_count).sum::<usize>()
    }

    fn children(&self) -> impl Iterator<Item = &LeafTree> {
        self.items.iter().filter_map(|i| match i {
            LeafItem::Node(t) => Some(t),
            LeafItem::Leaf => None,
        })
    }

    /// Leaves hanging off black nodes and off white nodes.
    pub fn leaf_counts(&self) -> (usize, usize) {
        let own = self.items.iter().filter(|i| matches!(i, LeafItem::Leaf)).count();
        let (mut b, mut w) = if self.color == Color::Black { (own, 0) } else { (0, own) };
        for c in self.children() {
            let (cb, cw) = c.leaf_counts();
            b += cb;
            w += cw;
        }
        (b, w)
    }

    fn check_colors(&self) -> Result<(), ModelError> {
        for c in self.children() {
            if c.color == self.color {
                return Err(ModelError::InvalidSpec("adjacent tree nodes must have opposite colours".into()));
            }
            c.check_colors()?;
        }
        Ok(())
    }
}

/// Darts of the tree-with-arches map under construction.
struct Builder {
    sigma: Vec<u32>,
    alpha: Vec<u32>,
    node_of: Vec<usize>,
    node_color: Vec<Color>,
    /// leaf darts in contour order
    leaves: Vec<u32>,
}

impl Builder {
    fn new_dart(&mut self, node: usize) -> u32 {
        self.sigma.push(u32::MAX);
        self.alpha.push(u32::MAX);
        self.node_of.push(node);
        (self.sigma.len() - 1) as u32
    }

    /// Lays out the darts around `t`; `parent` is its dart towards the parent, if any.
    fn visit(&mut self, t: &LeafTree, parent: Option<u32>) {
        let node = self.node_color.len();
        self.node_color.push(t.color);
        let mut around: Vec<u32> = Vec::new();
        if let Some(p) = parent {
            self.node_of[p as usize] = node;
            around.push(p);
        }
        for item in &t.items {
            match item {
                LeafItem::Leaf => {
                    let d = self.new_dart(node);
                    self.leaves.push(d);
                    around.push(d);
                }
                LeafItem::Node(child) => {
                    let down = self.new_dart(node);
                    let up = self.new_dart(usize::MAX);
                    self.alpha[down as usize] = up;
                    self.alpha[up as usize] = down;
                    around.push(down);
                    self.visit(child, Some(up));
                }
            }
        }
        for (i, &d) in around.iter().enumerate() {
            self.sigma[d as usize] = around[(i + 1) % around.len()];
        }
    }
}

/// Matches every black leaf with a white leaf: scanning the contour, a black leaf
/// immediately followed by a white one (ignoring matched leaves) is paired with it.
pub fn match_leaves(colors: &[Color]) -> Result<Vec<(usize, usize)>, ModelError> {
    let black = colors.iter().filter(|&&c| c == Color::Black).count();
    let white = colors.len() - black;
    if black != white {
        return Err(ModelError::UnequalLeaves { black, white });
    }
    let n = colors.len();
    let mut done = vec![false; n];
    let mut pairs = Vec::with_capacity(n / 2);
    let mut stack: Vec<usize> = Vec::new();
    for step in 0..2 * n {
        let i = step % n;
        if done[i] {
            continue;
        }
        match colors[i] {
            Color::Black => {
                if !stack.contains(&i) {
                    stack.push(i);
                }
            }
            Color::White => {
                if let Some(b) = stack.pop() {
                    done[b] = true;
                    done[i] = true;
                    pairs.push((b, i));
                }
            }
        }
    }
    Ok(pairs)
}

/// The maximally blocked map encoded by a balanced tree.
#[derive(Clone, Debug)]
pub struct LeafMatching {
    pub config: BlockedConfig,
    /// arches as (black leaf, white leaf) positions in contour order
    pub arches: Vec<(usize, usize)>,
}

/// Closes the leaves of a balanced tree into arches and returns the dual map, pointed
/// at the vertex dual to the external face, with the tree edges blocked.
pub fn leaf_matching(tree: &LeafTree) -> Result<LeafMatching, ModelError> {
    tree.check_colors()?;
    let mut b = Builder { sigma: Vec::new(), alpha: Vec::new(), node_of: Vec::new(), node_color: Vec::new(), leaves: Vec::new() };
    b.visit(tree, None);
    if b.sigma.is_empty() {
        return Err(ModelError::InvalidSpec("a tree without edges or leaves encodes no map".into()));
    }
    let colors: Vec<Color> = b.leaves.iter().map(|&d| b.node_color[b.node_of[d as usize]]).collect();
    let pairs = match_leaves(&colors)?;
    for &(x, y) in &pairs {
        let (dx, dy) = (b.leaves[x], b.leaves[y]);
        b.alpha[dx as usize] = dy;
        b.alpha[dy as usize] = dx;
    }
    let tree_map = PlanarMap::build(b.alpha.clone(), b.sigma.clone()).map_err(|e| ModelError::IdentityFailed(format!("arches cross: {e}")))?;
    let m = dual(&tree_map);
    // tree edges are those whose darts are not leaves
    let mut is_leaf = vec![false; b.sigma.len()];
    for &d in &b.leaves {
        is_leaf[d as usize] = true;
    }
    let blocked: Vec<usize> = (0..m.edge_count()).filter(|&e| !is_leaf[m.edge_darts(e)[0]]).collect();
    // faces of m are the tree nodes; align the colouring with the tree
    let black_at_zero = b.node_color[b.node_of[0]] == Color::Black;
    let mut found = None;
    for origin in 0..m.vertex_count() {
        let mut c = BlockedConfig::new(m.clone(), origin, &blocked, BlockMode::Directed).map_err(|e| ModelError::IdentityFailed(e.to_string()))?;
        if !black_at_zero {
            c = c.with_swapped_colors();
        }
        if validate_blocking(&c).valid {
            if found.is_some() {
                return Err(ModelError::IdentityFailed("more than one admissible origin".into()));
            }
            found = Some(c);
        }
    }
    let config = found.ok_or_else(|| ModelError::IdentityFailed("no vertex reaches every face".into()))?;
    Ok(LeafMatching { config, arches: pairs })
}

/// A random balanced tree with at most `max_nodes` nodes, by rejection.
pub fn random_balanced_tree<R: Rng>(rng: &mut R, max_nodes: usize) -> LeafTree {
    loop {
        let mut budget = max_nodes.max(1);
        let color = if rng.gen_bool(0.5) { Color::White } else { Color::Black };
        let t = grow(rng, color, &mut budget, true);
        let (bl, wl) = t.leaf_counts();
        if bl == wl && bl > 0 {
            return t;
        }
    }
}

fn grow<R: Rng>(rng: &mut R, color: Color, budget: &mut usize, root: bool) -> LeafTree {
    *budget -= 1;
    let degree = rng.gen_range(if root { 1..=4 } else { 0..=3 });
    let mut items = Vec::with_capacity(degree);
    for _ in 0..degree {
        if *budget > 0 && rng.gen_bool(0.45) {
            items.push(LeafItem::Node(grow(rng, color.flip(), budget, false)));
        } else {
            items.push(LeafItem::Leaf);
        }
    }
    LeafTree { color, items }
}

/// Node profile of a tree: valence counts per colour, each node counting its parent edge.
pub fn node_profile(t: &LeafTree) -> BTreeMap<(Color, usize), usize> {
    fn go(t: &LeafTree, root: bool, out: &mut BTreeMap<(Color, usize), usize>) {
        let valence = t.items.len() + usize::from(!root);
        *out.entry((t.color, valence)).or_default() += 1;
        for c in t.children() {
            go(c, false, out);
        }
    }
    let mut out = BTreeMap::new();
    go(t, true, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn leaf() -> LeafItem {
        LeafItem::Leaf
    }

    #[test]
    fn minimal_balanced_tree() {
        let t = LeafTree { color: Color::White, items: vec![leaf(), LeafItem::Node(LeafTree { color: Color::Black, items: vec![leaf()] })] };
        let m = leaf_matching(&t).unwrap();
        assert_eq!(m.arches.len(), 1);
        let map = m.config.map();
        assert_eq!(map.edge_count(), 2);
        assert_eq!(m.config.blocked_count(), 1);
    }

    #[test]
    fn unequal_leaves_rejected() {
        let t = LeafTree { color: Color::White, items: vec![leaf(), leaf()] };
        assert_eq!(leaf_matching(&t).unwrap_err(), ModelError::UnequalLeaves { black: 0, white: 2 });
    }

    #[test]
    fn random_trees_give_maximal_blockings() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let t = random_balanced_tree(&mut rng, 8);
            let m = leaf_matching(&t).unwrap();
            let map = m.config.map();
            assert_eq!(m.config.blocked_count(), map.face_count() - 1);
        }
    }

    #[test]
    fn tree_series_identity() {
        let v = |s: &str| AuxPoly::var(s);
        let b = max_blocked(&[(2, v("a2")), (3, v("a3"))], &[(2, v("b2")), (3, v("b3"))], 4).unwrap();
        assert!(b.z.coefficient(0).is_zero());
        // one white and one black bivalent node joined, with one leaf each
        assert_eq!(b.z.coefficient(2).coefficient_in(Var::new("a2"), 1).coefficient_in(Var::new("b2"), 1), AuxPoly::one());
    }
}
