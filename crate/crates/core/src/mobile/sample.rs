//! Exact Boltzmann-free random generation: a mobile of a fixed grade drawn with
//! probability proportional to its weight, by recursive choices driven by the solved
//! series evaluated at rational parameter values.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::models::Bundle;
use crate::planar_map::{BlockMode, BlockedConfig, Color};
use crate::series::{AuxPoly, GSeries, Var, ZLaurent};

use super::enumerate::{rooted, BItem, BTree, VTree, WItem, WTree};
use super::types::Mobile;
use super::{from_mobile_with_mode, MobileError};

/// Grade `n` to the coefficients `z^e` with non-zero value.
type Tab = Vec<BTreeMap<i64, BigRational>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum WKind {
    Vertex,
    Black { j: usize, marked: bool },
    Pair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BKind {
    Spurious,
    White { j: usize, marked: bool },
}

fn sampling(msg: impl Into<String>) -> MobileError {
    MobileError::Sampling(msg.into())
}

fn get(t: &Tab, n: usize, e: i64) -> BigRational {
    t.get(n).and_then(|row| row.get(&e)).cloned().unwrap_or_else(BigRational::zero)
}

fn add_to(t: &mut Tab, n: usize, e: i64, v: BigRational) {
    if v.is_zero() {
        return;
    }
    let slot = t[n].entry(e).or_insert_with(BigRational::zero);
    *slot += v;
    if slot.is_zero() {
        t[n].remove(&e);
    }
}

fn conv(a: &Tab, b: &Tab, top: usize) -> Tab {
    let mut out = vec![BTreeMap::new(); top + 1];
    for n1 in 0..=top {
        for (e1, x) in &a[n1] {
            for n2 in 0..=top - n1 {
                for (e2, y) in &b[n2] {
                    add_to(&mut out, n1 + n2, e1 + e2, x * y);
                }
            }
        }
    }
    out
}

fn tab_eq(a: &Tab, b: &Tab) -> bool {
    a.iter().zip(b).all(|(x, y)| x == y)
}

/// Random generator for one solved model at fixed parameter values.
pub struct Sampler {
    top: usize,
    r: Vec<BigRational>,
    pw: Vec<Tab>,
    /// `w[colour][charge]`: valence to weight by grade
    w: [Vec<BTreeMap<usize, Vec<BigRational>>>; 2],
    w2: Vec<BigRational>,
    qw_parts: Vec<Vec<(WKind, Tab)>>,
    qb_parts: Vec<Vec<(BKind, Tab)>>,
    qw_pow: Vec<Vec<Tab>>,
    qb_pow: Vec<Vec<Tab>>,
}

impl Sampler {
    /// Evaluates the series of `bundle` up to grade `top` at `values`, which must bind
    /// every parameter other than the grading variable.
    pub fn new(bundle: &Bundle, top: usize, values: &BTreeMap<String, BigRational>) -> Result<Sampler, MobileError> {
        if top > bundle.order {
            return Err(MobileError::OrderTooLow(bundle.order));
        }
        let spec = &bundle.spec;
        let vals: HashMap<Var, BigRational> = values.iter().map(|(k, v)| (Var::new(k), v.clone())).collect();
        let eval = |p: &AuxPoly| -> Result<BigRational, MobileError> {
            let mut q = p.clone();
            for v in p.vars() {
                let x = vals.get(&v).ok_or_else(|| sampling(format!("no value for {}", v.name())))?;
                q = q.substitute_value(v, x);
            }
            q.as_constant().ok_or_else(|| sampling("weight did not evaluate to a number"))
        };
        let series = |s: &GSeries| (0..=top).map(|n| eval(s.coefficient(n))).collect::<Result<Vec<_>, _>>();
        let laurent = |z: &ZLaurent| -> Result<Tab, MobileError> {
            let mut t = vec![BTreeMap::new(); top + 1];
            for (e, s) in z.terms() {
                for (n, v) in series(s)?.into_iter().enumerate() {
                    add_to(&mut t, n, e as i64, v);
                }
            }
            Ok(t)
        };
        let y = eval(&spec.y)?;
        let charges = bundle.charges();
        let r = series(&bundle.r())?;
        let pw = (0..charges).map(|i| laurent(bundle.p_white(i))).collect::<Result<Vec<_>, _>>()?;
        let pb = (0..charges).map(|i| laurent(bundle.p_black(i))).collect::<Result<Vec<_>, _>>()?;
        let mut w: [Vec<BTreeMap<usize, Vec<BigRational>>>; 2] = [Vec::new(), Vec::new()];
        for (slot, c) in w.iter_mut().zip([Color::White, Color::Black]) {
            let keys = match c {
                Color::White => &spec.white,
                Color::Black => &spec.black,
            };
            for i in 0..charges {
                let mut m = BTreeMap::new();
                for &k in keys.keys() {
                    if let Some(wk) = spec.face_weight(c, k, i) {
                        let s = series(&spec.grading.weight_series(&wk, top))?;
                        if s.iter().any(|x| !x.is_zero()) {
                            m.insert(k, s);
                        }
                    }
                }
                slot.push(m);
            }
        }
        let y_zero = spec.y.is_zero();
        let blockable = |i: usize, j: usize| spec.mode == BlockMode::Directed && !y_zero && spec.may_block(i, j);
        let w2 = match spec.face_weight(Color::Black, 2, 0) {
            Some(x) if spec.mode == BlockMode::Pairs && !y_zero => series(&spec.grading.weight_series(&x, top))?,
            _ => Vec::new(),
        };
        let empty = || vec![BTreeMap::new(); top + 1];
        let restrict = |t: &Tab, keep: &dyn Fn(i64) -> bool, f: &BigRational| -> Tab {
            t.iter().map(|row| row.iter().filter(|(&e, _)| keep(e)).map(|(&e, v)| (e, v * f)).collect()).collect()
        };
        let one = BigRational::one();
        let mut qw_parts = Vec::new();
        let mut qb_parts = Vec::new();
        for i in 0..charges {
            let mut parts = Vec::new();
            let mut vt = empty();
            for (n, v) in r.iter().enumerate() {
                add_to(&mut vt, n, -1, v.clone());
            }
            parts.push((WKind::Vertex, vt));
            let mut bparts = Vec::new();
            let mut st = empty();
            add_to(&mut st, 0, 1, one.clone());
            bparts.push((BKind::Spurious, st));
            if spec.mode == BlockMode::Pairs {
                parts.push((WKind::Black { j: i, marked: false }, restrict(&pb[i], &|e| e >= 0, &one)));
                bparts.push((BKind::White { j: i, marked: false }, restrict(&pw[i], &|e| e <= 0, &one)));
                if !w2.is_empty() {
                    let mut pt = empty();
                    for (a, c) in w2.iter().enumerate() {
                        for n in a..=top {
                            for (&e, v) in &pw[i][n - a] {
                                add_to(&mut pt, n, e, &y * c * v);
                            }
                        }
                    }
                    parts.push((WKind::Pair, pt));
                }
            } else {
                for j in 0..charges {
                    parts.push((WKind::Black { j, marked: false }, restrict(&pb[j], &|e| e >= 0, &one)));
                    bparts.push((BKind::White { j, marked: false }, restrict(&pw[j], &|e| e <= 0, &one)));
                    if blockable(i, j) {
                        parts.push((WKind::Black { j, marked: true }, restrict(&pb[j], &|_| true, &y)));
                        bparts.push((BKind::White { j, marked: true }, restrict(&pw[j], &|_| true, &y)));
                    }
                }
            }
            qw_parts.push(parts);
            qb_parts.push(bparts);
        }
        let mut qw_pow = Vec::new();
        let mut qb_pow = Vec::new();
        for i in 0..charges {
            let (qw, qb) = (sum_parts(&qw_parts[i], top), sum_parts(&qb_parts[i], top));
            // the decomposition must reproduce the solved series
            if !tab_eq(&qw, &laurent(bundle.q_white(i))?) || !tab_eq(&qb, &laurent(bundle.q_black(i))?) {
                return Err(sampling("these parameters use signed rules the sampler cannot follow"));
            }
            let kw = w[0][i].keys().max().copied().unwrap_or(1);
            let kb = w[1][i].keys().max().copied().unwrap_or(1);
            qw_pow.push(powers(&qw, kw, top));
            qb_pow.push(powers(&qb, kb, top));
        }
        Ok(Sampler { top, r, pw, w, w2, qw_parts, qb_parts, qw_pow, qb_pow })
    }

    /// Total weight of the mobiles of grade `n`.
    pub fn total(&self, n: usize) -> BigRational {
        self.r.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    /// A mobile rooted at a corner of label 0, of grade `n`, with probability
    /// proportional to its weight.
    pub fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Mobile, MobileError> {
        if n > self.top {
            return Err(MobileError::OrderTooLow(self.top));
        }
        if self.total(n).is_zero() {
            return Err(sampling(format!("no object of grade {n}")));
        }
        let v = self.sample_r(n, rng)?;
        Ok(rooted(&v))
    }

    fn sample_r(&self, mut n: usize, rng: &mut ChaCha8Rng) -> Result<VTree, MobileError> {
        let mut children = Vec::new();
        loop {
            // stop here, or hang a white node of grade a and continue with n - a
            let mut opts = vec![(None, if n == 0 { BigRational::one() } else { BigRational::zero() })];
            for (i, t) in self.pw.iter().enumerate() {
                for a in 0..=n {
                    opts.push((Some((i, a)), get(t, a, 1) * &self.r[n - a]));
                }
            }
            match choose(&opts, rng)? {
                None => return Ok(VTree { children }),
                Some((i, a)) => {
                    children.push(Rc::new(self.sample_pw(i, a, 1, rng)?));
                    n -= a;
                }
            }
        }
    }

    fn sample_pw(&self, i: usize, n: usize, e: i64, rng: &mut ChaCha8Rng) -> Result<WTree, MobileError> {
        let mut opts = Vec::new();
        for (&k, ws) in &self.w[0][i] {
            for (a, c) in ws.iter().enumerate().take(n + 1) {
                opts.push(((k, a), c * get(&self.qw_pow[i][k - 1], n - a, e)));
            }
        }
        let (k, a) = choose(&opts, rng)?;
        let mut items = Vec::new();
        for (m, e1) in sequence(&self.qw_pow[i], k - 1, n - a, e, rng)? {
            let opts: Vec<_> = self.qw_parts[i].iter().map(|(kind, t)| (*kind, get(t, m, e1))).collect();
            items.push(Rc::new(match choose(&opts, rng)? {
                WKind::Vertex => WItem::Vertex(Rc::new(self.sample_r(m, rng)?)),
                WKind::Black { j, marked } => WItem::Black { marked, b: Rc::new(self.sample_pb(j, m, e1, rng)?) },
                WKind::Pair => {
                    let opts: Vec<_> = self.w2.iter().enumerate().take(m + 1).map(|(a, c)| (a, c * get(&self.pw[i], m - a, e1))).collect();
                    let a = choose(&opts, rng)?;
                    WItem::Pair(Rc::new(self.sample_pw(i, m - a, e1, rng)?))
                }
            }));
        }
        Ok(WTree { charge: i as u8, items, exp: e })
    }

    fn sample_pb(&self, i: usize, n: usize, e: i64, rng: &mut ChaCha8Rng) -> Result<BTree, MobileError> {
        let mut opts = Vec::new();
        for (&k, ws) in &self.w[1][i] {
            for (a, c) in ws.iter().enumerate().take(n + 1) {
                opts.push(((k, a), c * get(&self.qb_pow[i][k - 1], n - a, e)));
            }
        }
        let (k, a) = choose(&opts, rng)?;
        let mut items = Vec::new();
        for (m, e1) in sequence(&self.qb_pow[i], k - 1, n - a, e, rng)? {
            let opts: Vec<_> = self.qb_parts[i].iter().map(|(kind, t)| (*kind, get(t, m, e1))).collect();
            items.push(Rc::new(match choose(&opts, rng)? {
                BKind::Spurious => BItem::Spurious,
                BKind::White { j, marked } => BItem::White { marked, w: Rc::new(self.sample_pw(j, m, e1, rng)?) },
            }));
        }
        Ok(BTree { charge: i as u8, items, exp: e })
    }
}

fn sum_parts<K>(parts: &[(K, Tab)], top: usize) -> Tab {
    let mut t = vec![BTreeMap::new(); top + 1];
    for (_, p) in parts {
        for (n, row) in p.iter().enumerate() {
            for (&e, v) in row {
                add_to(&mut t, n, e, v.clone());
            }
        }
    }
    t
}

/// `pows[r]` is the `r`-th power of `q`, for `r < max_k`.
fn powers(q: &Tab, max_k: usize, top: usize) -> Vec<Tab> {
    let mut unit = vec![BTreeMap::new(); top + 1];
    add_to(&mut unit, 0, 0, BigRational::one());
    let mut out = vec![unit];
    for r in 1..max_k {
        let next = conv(&out[r - 1], q, top);
        out.push(next);
    }
    out
}

/// Grades and exponents of the `r` items of a sequence of total `(n, e)`.
fn sequence(pows: &[Tab], r: usize, mut n: usize, mut e: i64, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, i64)>, MobileError> {
    let q = &pows[1.min(pows.len() - 1)];
    let mut out = Vec::with_capacity(r);
    for left in (1..=r).rev() {
        let mut opts = Vec::new();
        for m in 0..=n {
            for (&e1, v) in &q[m] {
                let rest = get(&pows[left - 1], n - m, e - e1);
                if !rest.is_zero() {
                    opts.push(((m, e1), v * rest));
                }
            }
        }
        let (m, e1) = choose(&opts, rng)?;
        out.push((m, e1));
        n -= m;
        e -= e1;
    }
    Ok(out)
}

/// Picks an option with probability proportional to its exact weight.
fn choose<T: Copy>(opts: &[(T, BigRational)], rng: &mut ChaCha8Rng) -> Result<T, MobileError> {
    if opts.iter().any(|(_, w)| w.is_negative()) {
        return Err(sampling("negative weights cannot be sampled"));
    }
    let lcm = opts.iter().fold(BigInt::one(), |l, (_, w)| l.lcm(w.denom()));
    let ints: Vec<BigInt> = opts.iter().map(|(_, w)| w.numer() * (&lcm / w.denom())).collect();
    let total: BigInt = ints.iter().sum();
    if total.is_zero() {
        return Err(sampling("no option has positive weight"));
    }
    let mut x = rng.gen_bigint_range(&BigInt::zero(), &total);
    for ((t, _), w) in opts.iter().zip(&ints) {
        if &x < w {
            return Ok(*t);
        }
        x -= w;
    }
    unreachable!("draw below the total")
}

/// Shifts labels so that the smallest label is 1 or the smallest flag is 0.
pub fn normalize_labels(m: &mut Mobile) {
    let labels = m.nodes().iter().filter_map(|n| n.label()).min();
    let flags = m.edges().iter().filter_map(|e| match e.kind {
        super::EdgeKind::Flagged { flag_left, flag_right, .. } => Some(flag_left.min(flag_right)),
        super::EdgeKind::Iii => None,
    });
    let k = labels.map(|l| 1 - l).into_iter().chain(flags.min().map(|f| -f)).max().unwrap_or(0);
    m.shift_labels(k);
}

/// One random mobile of grade `n` and the pointed map it encodes.
pub fn sample_mobile(bundle: &Bundle, n: usize, values: &BTreeMap<String, BigRational>, seed: u64) -> Result<(Mobile, BlockedConfig), MobileError> {
    let sampler = Sampler::new(bundle, n, values)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = sampler.sample(n, &mut rng)?;
    normalize_labels(&mut m);
    let map = from_mobile_with_mode(&m, bundle.spec.mode)?;
    Ok((m, map))
}
