//! Nested plane-tree JSON for mobiles and a canonical code for comparing them.

use serde::{Deserialize, Serialize};

use super::types::{EdgeKind, Mobile, Node};
use super::MobileError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    White,
    Black,
    Labeled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeJsonKind {
    Iii,
    Flagged,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub particles: Option<u8>,
    #[serde(default)]
    pub children: Vec<Child>,
}

/// An edge to a child; flags are read from the white end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Child {
    pub edge: EdgeJsonKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag_left: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag_right: Option<i64>,
    pub node: TreeNode,
}

/// A mobile hung from its root node. Children of the top node are listed clockwise;
/// `root_corner` indexes the corners of the top node in that listing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MobileJson {
    #[serde(default)]
    pub root_corner: Option<usize>,
    pub tree: TreeNode,
}

fn node_json(m: &Mobile, x: usize, parent: Option<usize>, start: usize) -> TreeNode {
    let (kind, label) = match m.node(x) {
        Node::White => (NodeKind::White, None),
        Node::Black => (NodeKind::Black, None),
        Node::Labeled(l) => (NodeKind::Labeled, Some(l)),
    };
    let rot = m.rotation(x);
    let d = rot.len();
    let mut children = Vec::new();
    for i in 0..d {
        let e = rot[(start + i) % d];
        if Some(e) == parent {
            continue;
        }
        let y = m.opposite(e, x);
        let c = node_json(m, y, Some(e), after(m, y, e));
        children.push(match m.edge(e).kind {
            EdgeKind::Iii => Child { edge: EdgeJsonKind::Iii, marked: None, flag_left: None, flag_right: None, node: c },
            EdgeKind::Flagged { marked, flag_left, flag_right } => {
                Child { edge: EdgeJsonKind::Flagged, marked: Some(marked), flag_left: Some(flag_left), flag_right: Some(flag_right), node: c }
            }
        });
    }
    let particles = (m.particles(x) > 0).then_some(m.particles(x));
    TreeNode { kind, label, particles, children }
}

/// Rotation index just after edge `e` at node `x`.
fn after(m: &Mobile, x: usize, e: usize) -> usize {
    let rot = m.rotation(x);
    rot.iter().position(|&f| f == e).map_or(0, |i| i + 1)
}

impl MobileJson {
    /// Rooted mobiles hang from the root node with the root corner last; others from node 0.
    pub fn from_mobile(m: &Mobile) -> MobileJson {
        if m.node_count() == 0 {
            return MobileJson { root_corner: None, tree: TreeNode { kind: NodeKind::Labeled, label: Some(0), particles: None, children: Vec::new() } };
        }
        match m.root() {
            Some((x, c)) => {
                let d = m.degree(x);
                let start = if d == 0 { 0 } else { (c + 1) % d };
                MobileJson { root_corner: Some(d.saturating_sub(1)), tree: node_json(m, x, None, start) }
            }
            None => MobileJson { root_corner: None, tree: node_json(m, 0, None, 0) },
        }
    }

    pub fn to_mobile(&self) -> Result<Mobile, MobileError> {
        let mut m = Mobile::new();
        let top = build(&mut m, &self.tree, None)?;
        if let Some(c) = self.root_corner {
            if c >= m.corner_count(top) {
                return Err(MobileError::Malformed(format!("root corner {c} out of range")));
            }
            m.set_root(Some((top, c)));
        }
        Ok(m)
    }

    pub fn parse(s: &str) -> Result<Mobile, MobileError> {
        let j: MobileJson = serde_json::from_str(s).map_err(|e| MobileError::Malformed(e.to_string()))?;
        j.to_mobile()
    }
}

fn build(m: &mut Mobile, t: &TreeNode, parent: Option<(usize, usize, EdgeKind)>) -> Result<usize, MobileError> {
    let node = match (&t.kind, t.label) {
        (NodeKind::Labeled, Some(l)) => Node::Labeled(l),
        (NodeKind::Labeled, None) => return Err(MobileError::Malformed("labeled node without a label".into())),
        (NodeKind::White, _) => Node::White,
        (NodeKind::Black, _) => Node::Black,
    };
    let x = m.add_node(node);
    m.set_particles(x, t.particles.unwrap_or(0));
    let mut rot = Vec::new();
    if let Some((p, _, kind)) = parent {
        let e = edge_between(m, p, x, kind)?;
        rot.push(e);
    }
    for c in &t.children {
        let kind = match c.edge {
            EdgeJsonKind::Iii => EdgeKind::Iii,
            EdgeJsonKind::Flagged => EdgeKind::Flagged {
                marked: c.marked.unwrap_or(false),
                flag_left: c.flag_left.ok_or_else(|| MobileError::Malformed("flagged edge without flag_left".into()))?,
                flag_right: c.flag_right.ok_or_else(|| MobileError::Malformed("flagged edge without flag_right".into()))?,
            },
        };
        let edges_before = m.edge_count();
        build(m, &c.node, Some((x, 0, kind)))?;
        rot.push(edges_before);
    }
    m.set_rotation(x, rot);
    Ok(x)
}

/// Pushes the edge between a parent and its new child, white end first.
fn edge_between(m: &mut Mobile, p: usize, x: usize, kind: EdgeKind) -> Result<usize, MobileError> {
    let (white, other) = match (m.node(p), m.node(x)) {
        (Node::White, _) => (p, x),
        (_, Node::White) => (x, p),
        _ => return Err(MobileError::Malformed("every edge needs a white end".into())),
    };
    Ok(m.push_edge(white, other, kind))
}

fn code_from(m: &Mobile, x: usize, parent: Option<usize>, start: usize, out: &mut Vec<i64>) {
    out.push(match m.node(x) {
        Node::White => -1,
        Node::Black => -2,
        Node::Labeled(_) => -3,
    });
    out.push(m.node(x).label().unwrap_or(0));
    out.push(m.particles(x) as i64);
    out.push(m.degree(x) as i64);
    let rot = m.rotation(x);
    let d = rot.len();
    for i in 0..d {
        let e = rot[(start + i) % d];
        if Some(e) == parent {
            continue;
        }
        match m.edge(e).kind {
            EdgeKind::Iii => out.push(-4),
            EdgeKind::Flagged { marked, flag_left, flag_right } => out.extend([-5, marked as i64, flag_left, flag_right]),
        }
        let y = m.opposite(e, x);
        code_from(m, y, Some(e), after(m, y, e), out);
    }
}

/// Code read from a corner: node kinds, labels, particles and edge data in clockwise
/// depth-first order.
fn code_at(m: &Mobile, x: usize, corner: usize) -> Vec<i64> {
    let d = m.degree(x);
    let mut out = Vec::new();
    code_from(m, x, None, if d == 0 { 0 } else { (corner + 1) % d }, &mut out);
    out
}

/// Equal for two mobiles exactly when they are isomorphic as plane trees with their
/// decorations (and root corner, if any).
pub fn canonical_code(m: &Mobile) -> Vec<i64> {
    if m.node_count() == 0 {
        return Vec::new();
    }
    if let Some((x, c)) = m.root() {
        return code_at(m, x, c);
    }
    (0..m.node_count()).flat_map(|x| (0..m.corner_count(x)).map(move |c| (x, c))).map(|(x, c)| code_at(m, x, c)).min().unwrap_or_default()
}
