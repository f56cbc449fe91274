use serde::{Deserialize, Serialize};

/// Node kinds of a mobile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Node {
    Labeled(i64),
    White,
    Black,
}

impl Node {
    pub fn label(self) -> Option<i64> {
        match self {
            Node::Labeled(n) => Some(n),
            _ => None,
        }
    }
}

/// Flags are read walking from the white end towards the black end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    /// white node to labeled vertex
    Iii,
    /// white node to black node
    Flagged { marked: bool, flag_left: i64, flag_right: i64 },
}

impl EdgeKind {
    pub fn is_flagged(self) -> bool {
        matches!(self, EdgeKind::Flagged { .. })
    }
    pub fn is_marked(self) -> bool {
        matches!(self, EdgeKind::Flagged { marked: true, .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MobileEdge {
    pub white: usize,
    pub other: usize,
    pub kind: EdgeKind,
}

/// A plane tree with labeled vertices, white and black nodes.
///
/// `rot[x]` lists the edges around node `x` in clockwise order; corner `i` of `x`
/// is the angular sector from `rot[x][i]` clockwise to `rot[x][i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Mobile {
    nodes: Vec<Node>,
    particles: Vec<u8>,
    edges: Vec<MobileEdge>,
    rot: Vec<Vec<usize>>,
    root: Option<(usize, usize)>,
}

impl Mobile {
    pub fn new() -> Mobile {
        Mobile::default()
    }

    pub fn add_node(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.particles.push(0);
        self.rot.push(Vec::new());
        self.nodes.len() - 1
    }

    /// Adds an edge, appending it at the clockwise end of both endpoint rotations.
    pub fn add_edge(&mut self, white: usize, other: usize, kind: EdgeKind) -> usize {
        let id = self.push_edge(white, other, kind);
        self.rot[white].push(id);
        self.rot[other].push(id);
        id
    }

    /// Adds an edge without touching the rotations; see [`Mobile::set_rotation`].
    pub fn push_edge(&mut self, white: usize, other: usize, kind: EdgeKind) -> usize {
        self.edges.push(MobileEdge { white, other, kind });
        self.edges.len() - 1
    }

    pub fn set_rotation(&mut self, node: usize, rot: Vec<usize>) {
        self.rot[node] = rot;
    }

    pub fn set_particles(&mut self, node: usize, count: u8) {
        self.particles[node] = count;
    }

    pub fn set_root(&mut self, root: Option<(usize, usize)>) {
        self.root = root;
    }

    pub fn set_label(&mut self, node: usize, label: i64) {
        if let Node::Labeled(_) = self.nodes[node] {
            self.nodes[node] = Node::Labeled(label);
        }
    }

    pub(crate) fn set_edge_endpoint(&mut self, e: usize, other: usize) {
        self.edges[e].other = other;
    }

    pub fn set_edge_kind(&mut self, e: usize, kind: EdgeKind) {
        self.edges[e].kind = kind;
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn node(&self, x: usize) -> Node {
        self.nodes[x]
    }
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }
    pub fn edge(&self, e: usize) -> MobileEdge {
        self.edges[e]
    }
    pub fn edges(&self) -> &[MobileEdge] {
        &self.edges
    }
    pub fn rotation(&self, x: usize) -> &[usize] {
        &self.rot[x]
    }
    pub fn degree(&self, x: usize) -> usize {
        self.rot[x].len()
    }
    pub fn particles(&self, x: usize) -> u8 {
        self.particles[x]
    }
    pub fn root(&self) -> Option<(usize, usize)> {
        self.root
    }

    /// The endpoint of `e` that is not `x`.
    pub fn opposite(&self, e: usize, x: usize) -> usize {
        let ed = self.edges[e];
        if ed.white == x {
            ed.other
        } else {
            ed.white
        }
    }

    /// Number of corners at node `x` (an isolated node has one).
    pub fn corner_count(&self, x: usize) -> usize {
        self.rot[x].len().max(1)
    }

    pub fn count_nodes(&self, kind: fn(Node) -> bool) -> usize {
        self.nodes.iter().filter(|&&n| kind(n)).count()
    }

    pub fn marked_count(&self) -> usize {
        self.edges.iter().filter(|e| e.kind.is_marked()).count()
    }

    /// Face valence encoded by a white or black node; labeled vertices give 0.
    ///
    /// For black nodes this is the number of flagged edges plus the label increments
    /// across its corners (the spurious dangling edges).
    pub fn valence(&self, x: usize) -> usize {
        match self.nodes[x] {
            Node::Labeled(_) => 0,
            Node::White => self.rot[x].len(),
            Node::Black => {
                let r = &self.rot[x];
                let mut v = r.len() as i64;
                for i in 0..r.len() {
                    let a = self.black_exit(r[i]);
                    let b = self.black_entry(r[(i + 1) % r.len()]);
                    v += b - a;
                }
                v.max(0) as usize
            }
        }
    }

    /// Label entering a white-node edge when turning clockwise around the white node.
    pub(crate) fn white_entry(&self, e: usize) -> i64 {
        match self.edges[e].kind {
            EdgeKind::Iii => self.nodes[self.edges[e].other].label().unwrap_or(0),
            EdgeKind::Flagged { flag_left, .. } => flag_left,
        }
    }

    pub(crate) fn white_exit(&self, e: usize) -> i64 {
        match self.edges[e].kind {
            EdgeKind::Iii => self.nodes[self.edges[e].other].label().unwrap_or(0) - 1,
            EdgeKind::Flagged { flag_right, .. } => flag_right,
        }
    }

    /// Clockwise around a black node a flagged edge is crossed from its right flag to its left flag.
    pub(crate) fn black_entry(&self, e: usize) -> i64 {
        match self.edges[e].kind {
            EdgeKind::Flagged { flag_right, .. } => flag_right,
            EdgeKind::Iii => 0,
        }
    }

    pub(crate) fn black_exit(&self, e: usize) -> i64 {
        match self.edges[e].kind {
            EdgeKind::Flagged { flag_left, .. } => flag_left,
            EdgeKind::Iii => 0,
        }
    }

    /// Adds `k` to every label and flag.
    pub fn shift_labels(&mut self, k: i64) {
        for n in self.nodes.iter_mut() {
            if let Node::Labeled(l) = n {
                *l += k;
            }
        }
        for e in self.edges.iter_mut() {
            if let EdgeKind::Flagged { flag_left, flag_right, .. } = &mut e.kind {
                *flag_left += k;
                *flag_right += k;
            }
        }
    }

    pub fn min_label(&self) -> Option<i64> {
        let labels = self.nodes.iter().filter_map(|n| n.label());
        let flags = self.edges.iter().filter_map(|e| match e.kind {
            EdgeKind::Flagged { flag_left, flag_right, .. } => Some(flag_left.min(flag_right)),
            EdgeKind::Iii => None,
        });
        labels.chain(flags).min()
    }
}
