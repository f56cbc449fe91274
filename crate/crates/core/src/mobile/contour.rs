use super::types::{EdgeKind, Mobile, Node};
use super::MobileError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TokenKind {
    /// corner `corner` of labeled vertex `node`
    Corner { node: usize, corner: usize },
    /// one side of a flagged edge; `left` is the side read walking from white to black
    Flag { edge: usize, left: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    pub kind: TokenKind,
    pub value: i64,
}

impl Token {
    pub fn is_corner(&self) -> bool {
        matches!(self.kind, TokenKind::Corner { .. })
    }
}

/// Cyclic sequence of labels met walking clockwise around the mobile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContourWord {
    pub tokens: Vec<Token>,
}

impl ContourWord {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
    pub fn values(&self) -> Vec<i64> {
        self.tokens.iter().map(|t| t.value).collect()
    }

    /// Position of the first step breaking the ratchet rule, if any.
    pub fn ratchet_violation(&self) -> Option<usize> {
        let n = self.tokens.len();
        (0..n).find(|&i| {
            let (a, b) = (self.tokens[i], self.tokens[(i + 1) % n]);
            b.value < a.value && !(a.is_corner() && b.value == a.value - 1)
        })
    }
}

/// Position of every edge in the rotation of each of its ends: `(at white, at other)`.
pub(crate) fn rotation_positions(m: &Mobile) -> Vec<(usize, usize)> {
    let mut pos = vec![(usize::MAX, usize::MAX); m.edge_count()];
    for x in 0..m.node_count() {
        for (i, &e) in m.rotation(x).iter().enumerate() {
            if m.edge(e).white == x {
                pos[e].0 = i;
            } else {
                pos[e].1 = i;
            }
        }
    }
    pos
}

/// Walks around the tree keeping it on the right, starting at the root corner
/// (or the first corner of the first labeled vertex).
pub fn contour_word(m: &Mobile) -> Result<ContourWord, MobileError> {
    let word = contour_unchecked(m)?;
    match word.ratchet_violation() {
        Some(i) => Err(MobileError::RatchetViolated(i)),
        None => Ok(word),
    }
}

pub(crate) fn contour_unchecked(m: &Mobile) -> Result<ContourWord, MobileError> {
    if m.node_count() == 0 {
        return Ok(ContourWord { tokens: Vec::new() });
    }
    let start = m.root().unwrap_or_else(|| {
        let x = (0..m.node_count()).find(|&x| matches!(m.node(x), Node::Labeled(_))).unwrap_or(0);
        (x, 0)
    });
    let pos = rotation_positions(m);
    let mut tokens = Vec::new();
    let (mut x, mut i) = start;
    let limit = 2 * m.edge_count() + 1;
    for _ in 0..limit {
        if let Node::Labeled(l) = m.node(x) {
            tokens.push(Token { kind: TokenKind::Corner { node: x, corner: i }, value: l });
        }
        let d = m.degree(x);
        if d == 0 {
            break;
        }
        let e = m.rotation(x)[(i + 1) % d];
        let ed = m.edge(e);
        if let EdgeKind::Flagged { flag_left, flag_right, .. } = ed.kind {
            let left = ed.white == x;
            let value = if left { flag_left } else { flag_right };
            tokens.push(Token { kind: TokenKind::Flag { edge: e, left }, value });
        }
        let (y, j) = if ed.white == x { (ed.other, pos[e].1) } else { (ed.white, pos[e].0) };
        if j == usize::MAX {
            return Err(MobileError::Malformed(format!("edge {e} missing from a rotation")));
        }
        (x, i) = (y, j);
        if (x, i) == start {
            return Ok(ContourWord { tokens });
        }
    }
    if m.edge_count() == 0 {
        Ok(ContourWord { tokens })
    } else {
        Err(MobileError::Malformed("contour does not close; the mobile is not a tree".into()))
    }
}
