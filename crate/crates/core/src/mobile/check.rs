use std::fmt;

use super::types::{EdgeKind, Mobile, Node};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// an edge whose endpoint kinds do not fit its type
    BadEndpoint {
        edge: usize,
    },
    /// rotations do not list every edge exactly once at each of its ends
    RotationMismatch {
        node: usize,
    },
    NotATree,
    NonPositiveLabel {
        node: usize,
        label: i64,
    },
    NegativeFlag {
        edge: usize,
    },
    /// clockwise around a white node, the exit of one edge differs from the entry of the next
    WhiteCorner {
        node: usize,
        corner: usize,
    },
    /// an unmarked flagged edge whose flags decrease clockwise around the white node
    WhiteCrossing {
        edge: usize,
    },
    /// clockwise around a black node, the label decreases across a corner
    BlackCorner {
        node: usize,
        corner: usize,
    },
    /// neither a vertex labeled 1 nor a flag 0
    NoMinimum,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadEndpoint { edge } => write!(f, "edge {edge} joins nodes of the wrong kinds"),
            Violation::RotationMismatch { node } => write!(f, "rotation at node {node} is inconsistent with the edge list"),
            Violation::NotATree => write!(f, "the mobile is not a tree"),
            Violation::NonPositiveLabel { node, label } => write!(f, "vertex {node} has non-positive label {label}"),
            Violation::NegativeFlag { edge } => write!(f, "edge {edge} carries a negative flag"),
            Violation::WhiteCorner { node, corner } => write!(f, "white node {node} breaks the corner rule at corner {corner}"),
            Violation::WhiteCrossing { edge } => write!(f, "unmarked edge {edge} has decreasing flags"),
            Violation::BlackCorner { node, corner } => write!(f, "black node {node} decreases at corner {corner}"),
            Violation::NoMinimum => write!(f, "no vertex labeled 1 and no flag 0"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WellLabeledReport {
    pub violations: Vec<Violation>,
}

impl WellLabeledReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn structure(m: &Mobile, out: &mut Vec<Violation>) {
    let n = m.node_count();
    let mut seen = vec![0u8; m.edge_count()];
    for (id, e) in m.edges().iter().enumerate() {
        let ok = e.white < n
            && e.other < n
            && m.node(e.white) == Node::White
            && match e.kind {
                EdgeKind::Iii => matches!(m.node(e.other), Node::Labeled(_)),
                EdgeKind::Flagged { .. } => m.node(e.other) == Node::Black,
            };
        if !ok {
            out.push(Violation::BadEndpoint { edge: id });
        }
    }
    if !out.is_empty() {
        return;
    }
    for x in 0..n {
        for &e in m.rotation(x) {
            if e >= m.edge_count() || (m.edge(e).white != x && m.edge(e).other != x) {
                out.push(Violation::RotationMismatch { node: x });
                return;
            }
            seen[e] += 1;
        }
    }
    if let Some(e) = seen.iter().position(|&c| c != 2) {
        out.push(Violation::RotationMismatch { node: m.edge(e).white });
        return;
    }
    if n == 0 || m.edge_count() + 1 != n {
        out.push(Violation::NotATree);
        return;
    }
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for &e in m.rotation(x) {
            let y = m.opposite(e, x);
            if !reached[y] {
                reached[y] = true;
                stack.push(y);
            }
        }
    }
    if reached.iter().any(|r| !r) {
        out.push(Violation::NotATree);
    }
}

fn local_rules(m: &Mobile, out: &mut Vec<Violation>) {
    for x in 0..m.node_count() {
        let r = m.rotation(x);
        match m.node(x) {
            Node::White => {
                for i in 0..r.len() {
                    if m.white_exit(r[i]) != m.white_entry(r[(i + 1) % r.len()]) {
                        out.push(Violation::WhiteCorner { node: x, corner: i });
                    }
                }
            }
            Node::Black => {
                for i in 0..r.len() {
                    if m.black_exit(r[i]) > m.black_entry(r[(i + 1) % r.len()]) {
                        out.push(Violation::BlackCorner { node: x, corner: i });
                    }
                }
            }
            Node::Labeled(_) => {}
        }
    }
    for (id, e) in m.edges().iter().enumerate() {
        if let EdgeKind::Flagged { marked: false, flag_left, flag_right } = e.kind {
            if flag_left > flag_right {
                out.push(Violation::WhiteCrossing { edge: id });
            }
        }
    }
}

/// Tree structure and the corner and crossing rules, without any positivity.
pub fn check_local(m: &Mobile) -> WellLabeledReport {
    let mut v = Vec::new();
    structure(m, &mut v);
    if v.is_empty() {
        local_rules(m, &mut v);
    }
    WellLabeledReport { violations: v }
}

/// Every rule a mobile coming from a pointed map must satisfy.
pub fn check_well_labeled(m: &Mobile) -> WellLabeledReport {
    let mut report = check_local(m);
    let v = &mut report.violations;
    if v.iter().any(|x| matches!(x, Violation::BadEndpoint { .. } | Violation::RotationMismatch { .. })) {
        return report;
    }
    let mut has_min = false;
    for x in 0..m.node_count() {
        if let Node::Labeled(l) = m.node(x) {
            if l <= 0 {
                v.push(Violation::NonPositiveLabel { node: x, label: l });
            }
            has_min |= l == 1;
        }
    }
    for (id, e) in m.edges().iter().enumerate() {
        if let EdgeKind::Flagged { flag_left, flag_right, .. } = e.kind {
            if flag_left < 0 || flag_right < 0 {
                v.push(Violation::NegativeFlag { edge: id });
            }
            has_min |= flag_left == 0 || flag_right == 0;
        }
    }
    if !has_min {
        v.push(Violation::NoMinimum);
    }
    report
}
