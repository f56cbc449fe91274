//! Exhaustive generation of unrestricted mobiles rooted at a labeled corner.
//!
//! Sub-mobiles are built bottom-up by node count. A white node seen from its root
//! edge is a sequence of `k - 1` items (a labeled vertex, a black node through an
//! unmarked or marked flagged edge); a black node is a sequence of spurious steps and
//! white nodes. Labels follow from the corner rules once the root label is fixed to 0.

use std::rc::Rc;

use crate::models::ModelSpec;
use crate::planar_map::{BlockMode, Color};
use crate::series::AuxPoly;

use super::types::{EdgeKind, Mobile, Node};

#[derive(Debug)]
pub(super) enum WItem {
    Vertex(Rc<VTree>),
    Black {
        marked: bool,
        b: Rc<BTree>,
    },
    /// a bivalent black node both of whose edges are marked
    Pair(Rc<WTree>),
}

#[derive(Debug)]
pub(super) enum BItem {
    Spurious,
    White { marked: bool, w: Rc<WTree> },
}

#[derive(Debug)]
pub(super) struct WTree {
    pub(super) charge: u8,
    pub(super) items: Vec<Rc<WItem>>,
    pub(super) exp: i64,
}

#[derive(Debug)]
pub(super) struct BTree {
    pub(super) charge: u8,
    pub(super) items: Vec<Rc<BItem>>,
    pub(super) exp: i64,
}

/// A labeled vertex and the white nodes in its corners, each returning one step up.
#[derive(Debug)]
pub(super) struct VTree {
    pub(super) children: Vec<Rc<WTree>>,
}

fn w_exp(i: &WItem) -> i64 {
    match i {
        WItem::Vertex(_) => -1,
        WItem::Black { b, .. } => b.exp,
        WItem::Pair(w) => w.exp,
    }
}

fn b_exp(i: &BItem) -> i64 {
    match i {
        BItem::Spurious => 1,
        BItem::White { w, .. } => w.exp,
    }
}

/// All sequences of `r` items, item sizes summing to `total`.
fn sequences<T>(by_size: &[Vec<Rc<T>>], r: usize, total: usize) -> Vec<Vec<Rc<T>>> {
    if r == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for m in 0..=total.min(by_size.len().saturating_sub(1)) {
        for first in &by_size[m] {
            for mut rest in sequences(by_size, r - 1, total - m) {
                rest.insert(0, first.clone());
                out.push(rest);
            }
        }
    }
    out
}

fn charges(spec: &ModelSpec) -> usize {
    spec.max_charge() + 1
}

fn valences(spec: &ModelSpec, c: Color, charge: usize) -> Vec<usize> {
    let keys = match c {
        Color::White => &spec.white,
        Color::Black => &spec.black,
    };
    keys.keys().copied().filter(|&k| spec.face_weight(c, k, charge).is_some_and(|w| !w.is_zero())).collect()
}

/// Labeled-vertex sub-mobiles by node count.
fn build_tables(spec: &ModelSpec, max_nodes: usize) -> Vec<Vec<Rc<VTree>>> {
    let nc = charges(spec);
    let y_zero = spec.y.is_zero();
    let blockable = |i: usize, j: usize| spec.mode == BlockMode::Directed && !y_zero && spec.may_block(i, j);
    let pair_ok = spec.mode == BlockMode::Pairs && !y_zero && spec.face_weight(Color::Black, 2, 0).is_some();
    let mut whites: Vec<Vec<Vec<Rc<WTree>>>> = vec![Vec::new(); nc];
    let mut blacks: Vec<Vec<Vec<Rc<BTree>>>> = vec![Vec::new(); nc];
    let mut verts: Vec<Vec<Rc<VTree>>> = Vec::new();
    let mut witems: Vec<Vec<Vec<Rc<WItem>>>> = vec![Vec::new(); nc];
    let mut bitems: Vec<Vec<Vec<Rc<BItem>>>> = vec![Vec::new(); nc];
    for n in 0..=max_nodes {
        for i in 0..nc {
            let mut ws = Vec::new();
            if n > 0 {
                for k in valences(spec, Color::White, i) {
                    for items in sequences(&witems[i], k - 1, n - 1) {
                        let exp = items.iter().map(|x| w_exp(x)).sum();
                        ws.push(Rc::new(WTree { charge: i as u8, items, exp }));
                    }
                }
            }
            whites[i].push(ws);
            let mut bs = Vec::new();
            if n > 0 {
                for k in valences(spec, Color::Black, i) {
                    for items in sequences(&bitems[i], k - 1, n - 1) {
                        let exp = items.iter().map(|x| b_exp(x)).sum();
                        bs.push(Rc::new(BTree { charge: i as u8, items, exp }));
                    }
                }
            }
            blacks[i].push(bs);
        }
        // a labeled vertex holds any sequence of white nodes of step +1
        let ups: Vec<Vec<Rc<WTree>>> = (0..=n).map(|m| (0..nc).flat_map(|i| whites[i][m].iter().filter(|w| w.exp == 1).cloned()).collect()).collect();
        let mut vs = Vec::new();
        for r in 0..=n {
            for children in sequences(&ups, r, n) {
                vs.push(Rc::new(VTree { children }));
            }
        }
        verts.push(vs);
        for i in 0..nc {
            let mut items: Vec<Rc<WItem>> = verts[n].iter().map(|v| Rc::new(WItem::Vertex(v.clone()))).collect();
            for j in 0..nc {
                for b in &blacks[j][n] {
                    if b.exp >= 0 {
                        items.push(Rc::new(WItem::Black { marked: false, b: b.clone() }));
                    }
                    if blockable(i, j) {
                        items.push(Rc::new(WItem::Black { marked: true, b: b.clone() }));
                    }
                }
            }
            if pair_ok && n > 0 {
                items.extend(whites[i][n - 1].iter().map(|w| Rc::new(WItem::Pair(w.clone()))));
            }
            witems[i].push(items);
            let mut items: Vec<Rc<BItem>> = Vec::new();
            if n == 0 {
                items.push(Rc::new(BItem::Spurious));
            }
            for j in 0..nc {
                for w in &whites[j][n] {
                    if w.exp <= 0 {
                        items.push(Rc::new(BItem::White { marked: false, w: w.clone() }));
                    }
                    if blockable(i, j) {
                        items.push(Rc::new(BItem::White { marked: true, w: w.clone() }));
                    }
                }
            }
            bitems[i].push(items);
        }
    }
    verts
}

/// Assembles the plane tree; rotations list the root edge first.
struct Builder {
    m: Mobile,
}

impl Builder {
    fn vertex(&mut self, v: &VTree, label: i64, parent: Option<usize>) -> usize {
        let x = self.m.add_node(Node::Labeled(label));
        let mut rot: Vec<usize> = parent.into_iter().collect();
        for w in &v.children {
            let (_, e) = self.white_below_vertex(w, x, label);
            rot.push(e);
        }
        self.m.set_rotation(x, rot);
        x
    }

    fn white_below_vertex(&mut self, w: &WTree, vertex: usize, label: i64) -> (usize, usize) {
        let x = self.m.add_node(Node::White);
        let e = self.m.push_edge(x, vertex, EdgeKind::Iii);
        self.white_items(w, x, e, label - 1);
        (x, e)
    }

    /// Fills a white node whose root edge `e` is left at value `c`.
    fn white_items(&mut self, w: &WTree, x: usize, e: usize, mut c: i64) {
        self.m.set_particles(x, w.charge);
        let mut rot = vec![e];
        for item in &w.items {
            match item.as_ref() {
                WItem::Vertex(v) => {
                    let e = self.m.push_edge(x, usize::MAX, EdgeKind::Iii);
                    let y = self.vertex(v, c, Some(e));
                    self.set_other(e, y);
                    rot.push(e);
                    c -= 1;
                }
                WItem::Black { marked, b } => {
                    let kind = EdgeKind::Flagged { marked: *marked, flag_left: c, flag_right: c + b.exp };
                    let e = self.m.push_edge(x, usize::MAX, kind);
                    let y = self.black(b, e, c);
                    self.set_other(e, y);
                    rot.push(e);
                    c += b.exp;
                }
                WItem::Pair(child) => {
                    let kind = EdgeKind::Flagged { marked: true, flag_left: c, flag_right: c + child.exp };
                    let e1 = self.m.push_edge(x, usize::MAX, kind);
                    let y = self.m.add_node(Node::Black);
                    self.set_other(e1, y);
                    let z = self.m.add_node(Node::White);
                    let kind = EdgeKind::Flagged { marked: true, flag_left: c + child.exp, flag_right: c };
                    let e2 = self.m.push_edge(z, y, kind);
                    self.white_items(child, z, e2, c);
                    self.m.set_rotation(y, vec![e1, e2]);
                    rot.push(e1);
                    c += child.exp;
                }
            }
        }
        self.m.set_rotation(x, rot);
    }

    /// A black node entered through `e`, whose left flag is `c`.
    fn black(&mut self, b: &BTree, e: usize, mut c: i64) -> usize {
        let x = self.m.add_node(Node::Black);
        self.m.set_particles(x, b.charge);
        let mut rot = vec![e];
        for item in &b.items {
            match item.as_ref() {
                BItem::Spurious => c += 1,
                BItem::White { marked, w } => {
                    let z = self.m.add_node(Node::White);
                    let kind = EdgeKind::Flagged { marked: *marked, flag_left: c + w.exp, flag_right: c };
                    let e = self.m.push_edge(z, x, kind);
                    self.white_items(w, z, e, c);
                    rot.push(e);
                    c += w.exp;
                }
            }
        }
        self.m.set_rotation(x, rot);
        x
    }

    fn set_other(&mut self, e: usize, y: usize) {
        self.m.set_edge_endpoint(e, y);
    }
}

pub(super) fn rooted(v: &VTree) -> Mobile {
    let mut b = Builder { m: Mobile::new() };
    let x = b.vertex(v, 0, None);
    let d = b.m.degree(x);
    b.m.set_root(Some((x, d.saturating_sub(1))));
    b.m
}

/// Every unrestricted mobile of the model with at most `max_nodes` white and black
/// nodes, rooted at a labeled corner of label 0, each exactly once.
pub fn enumerate_mobiles(spec: &ModelSpec, max_nodes: usize) -> Vec<Mobile> {
    build_tables(spec, max_nodes).iter().flatten().map(|v| rooted(v)).collect()
}

/// Weight of a mobile: its face weights times `y` per blocked unit.
pub fn mobile_weight(spec: &ModelSpec, m: &Mobile) -> Option<AuxPoly> {
    let mut w = AuxPoly::one();
    for x in 0..m.node_count() {
        let c = match m.node(x) {
            Node::White => Color::White,
            Node::Black => Color::Black,
            Node::Labeled(_) => continue,
        };
        w = &w * &spec.face_weight(c, m.valence(x), m.particles(x) as usize)?;
    }
    let units = match spec.mode {
        BlockMode::Pairs => m.marked_count() / 2,
        _ => m.marked_count(),
    };
    Some(&w * &spec.y.pow(units as u32))
}

/// Number of white and black nodes.
pub fn face_nodes(m: &Mobile) -> usize {
    m.nodes().iter().filter(|n| !matches!(n, Node::Labeled(_))).count()
}
