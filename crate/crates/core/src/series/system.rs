//! Order-by-order fixed-point solver for systems of Laurent/series equations.

use std::collections::BTreeMap;

use super::gseries::GSeries;
use super::laurent::{Proj, ZLaurent};
use super::poly::AuxPoly;
use super::SeriesError;

/// Right-hand-side expression. Every value is a `ZLaurent`; scalar series live at `z^0`.
#[derive(Clone, Debug)]
pub enum Expr {
    Const(ZLaurent),
    Var(usize),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Project(Proj, Box<Expr>),
    ShiftZ(i32, Box<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    /// Constant `p t^grade z^e`.
    pub fn weight(p: AuxPoly, grade: usize, e: i32, order: usize) -> Expr {
        Expr::Const(ZLaurent::term(e, GSeries::monomial(grade, p, order)))
    }

    pub fn one(order: usize) -> Expr {
        Expr::Const(ZLaurent::z_pow(0, order))
    }

    pub fn z(e: i32, order: usize) -> Expr {
        Expr::Const(ZLaurent::z_pow(e, order))
    }

    pub fn sum(items: Vec<Expr>) -> Expr {
        Expr::Sum(items)
    }

    pub fn prod(items: Vec<Expr>) -> Expr {
        Expr::Product(items)
    }

    pub fn pow(self, k: u32) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    pub fn project(self, p: Proj) -> Expr {
        Expr::Project(p, Box::new(self))
    }

    pub fn shift(self, k: i32) -> Expr {
        Expr::ShiftZ(k, Box::new(self))
    }

    pub fn neg(self, order: usize) -> Expr {
        Expr::prod(vec![Expr::weight(AuxPoly::int(-1), 0, 0, order), self])
    }

    /// Lower bound on the grading valuation given lower bounds `vals` for the unknowns;
    /// `None` means identically zero.
    fn low_val(&self, vals: &[usize]) -> Option<usize> {
        match self {
            Expr::Const(c) => c.terms().filter_map(|(_, s)| s.valuation()).min(),
            Expr::Var(i) => Some(vals[*i]),
            Expr::Sum(items) => items.iter().filter_map(|e| e.low_val(vals)).min(),
            Expr::Product(items) => {
                let mut acc = 0;
                for it in items {
                    acc += it.low_val(vals)?;
                }
                Some(acc)
            }
            Expr::Pow(e, k) => {
                if *k == 0 {
                    Some(0)
                } else {
                    e.low_val(vals).map(|v| v * *k as usize)
                }
            }
            Expr::Project(_, e) | Expr::ShiftZ(_, e) => e.low_val(vals),
        }
    }

    /// Minimal grading shift applied to each unknown occurring in the expression.
    fn shifts(&self, vals: &[usize]) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        match self {
            Expr::Const(_) => {}
            Expr::Var(i) => {
                out.insert(*i, 0);
            }
            Expr::Sum(items) => {
                for it in items {
                    merge_min(&mut out, it.shifts(vals), 0);
                }
            }
            Expr::Product(items) => {
                let lows: Vec<Option<usize>> = items.iter().map(|e| e.low_val(vals)).collect();
                if lows.iter().any(Option::is_none) {
                    return out;
                }
                let total: usize = lows.iter().map(|v| v.unwrap()).sum();
                for (it, v) in items.iter().zip(lows.iter()) {
                    merge_min(&mut out, it.shifts(vals), total - v.unwrap());
                }
            }
            Expr::Pow(e, k) => {
                if *k > 0 {
                    if let Some(v) = e.low_val(vals) {
                        merge_min(&mut out, e.shifts(vals), v * (*k as usize - 1));
                    }
                }
            }
            Expr::Project(_, e) | Expr::ShiftZ(_, e) => return e.shifts(vals),
        }
        out
    }

    pub fn eval(&self, values: &[ZLaurent], order: usize) -> ZLaurent {
        match self {
            Expr::Const(c) => c.truncate(order),
            Expr::Var(i) => values[*i].truncate(order),
            Expr::Sum(items) => {
                let mut acc = ZLaurent::zero(order);
                for it in items {
                    acc = acc.add(&it.eval(values, order));
                }
                acc
            }
            Expr::Product(items) => {
                let mut acc = ZLaurent::z_pow(0, order);
                for it in items {
                    let v = it.eval(values, order);
                    if v.is_zero() {
                        return ZLaurent::zero(order);
                    }
                    acc = acc.mul_to(&v, order);
                }
                acc
            }
            Expr::Pow(e, k) => e.eval(values, order).pow_to(*k, order),
            Expr::Project(p, e) => e.eval(values, order).project(*p),
            Expr::ShiftZ(k, e) => e.eval(values, order).shift(*k),
        }
    }
}

fn merge_min(into: &mut BTreeMap<usize, usize>, from: BTreeMap<usize, usize>, add: usize) {
    for (k, v) in from {
        let v = v + add;
        into.entry(k).and_modify(|w| *w = (*w).min(v)).or_insert(v);
    }
}

/// Named unknowns with one defining equation each.
#[derive(Clone, Debug, Default)]
pub struct System {
    names: Vec<String>,
    rhs: Vec<Option<Expr>>,
    windows: Vec<Option<(i32, i32)>>,
}

impl System {
    pub fn new() -> System {
        System::default()
    }

    /// Declares an unknown, returning its index.
    pub fn unknown(&mut self, name: &str) -> usize {
        self.names.push(name.to_string());
        self.rhs.push(None);
        self.windows.push(None);
        self.names.len() - 1
    }

    pub fn define(&mut self, i: usize, e: Expr) {
        self.rhs[i] = Some(e);
    }

    /// Restricts the z-exponents kept for an unknown.
    pub fn set_window(&mut self, i: usize, lo: i32, hi: i32) {
        self.windows[i] = Some((lo, hi));
    }

    pub fn widen_windows(&mut self, by: i32) {
        for w in self.windows.iter_mut().flatten() {
            w.0 -= by;
            w.1 += by;
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn equations(&self) -> Result<Vec<&Expr>, SeriesError> {
        self.rhs.iter().enumerate().map(|(i, e)| e.as_ref().ok_or_else(|| SeriesError::Undefined(self.names[i].clone()))).collect()
    }

    /// Valuation lower bounds of the unknowns, by monotone iteration from zero.
    fn valuations(&self, eqs: &[&Expr]) -> Vec<usize> {
        const CAP: usize = 64;
        let mut vals = vec![0usize; eqs.len()];
        loop {
            let mut changed = false;
            for (i, e) in eqs.iter().enumerate() {
                let v = e.low_val(&vals).unwrap_or(CAP).min(CAP);
                if v > vals[i] {
                    vals[i] = v;
                    changed = true;
                }
            }
            if !changed {
                return vals;
            }
        }
    }

    /// Static contractivity check; returns an evaluation order in which every
    /// zero-shift dependency precedes its user.
    pub fn sweep_order(&self) -> Result<Vec<usize>, SeriesError> {
        let eqs = self.equations()?;
        let n = eqs.len();
        let vals = self.valuations(&eqs);
        let mut deps: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in eqs.iter().enumerate() {
            for (j, s) in e.shifts(&vals) {
                if s == 0 {
                    deps[i].push(j);
                }
            }
        }
        // Depth-first topological sort with cycle detection.
        let mut state = vec![0u8; n];
        let mut order = Vec::with_capacity(n);
        fn visit(i: usize, deps: &[Vec<usize>], state: &mut [u8], order: &mut Vec<usize>, names: &[String]) -> Result<(), SeriesError> {
            match state[i] {
                2 => return Ok(()),
                1 => return Err(SeriesError::NotContractive(names[i].clone())),
                _ => {}
            }
            state[i] = 1;
            for &j in &deps[i] {
                visit(j, deps, state, order, names)?;
            }
            state[i] = 2;
            order.push(i);
            Ok(())
        }
        for i in 0..n {
            visit(i, &deps, &mut state, &mut order, &self.names)?;
        }
        Ok(order)
    }

    /// Solves to grading order `order` by Gauss-Seidel sweeps of increasing truncation.
    pub fn solve(&self, order: usize) -> Result<Solution, SeriesError> {
        self.solve_inner(order, None)
    }

    /// Like [`System::solve`], also returning the values after every sweep.
    pub fn solve_traced(&self, order: usize) -> Result<(Solution, Vec<Vec<ZLaurent>>), SeriesError> {
        let mut trace = Vec::new();
        let sol = self.solve_inner(order, Some(&mut trace))?;
        Ok((sol, trace))
    }

    fn solve_inner(&self, order: usize, mut trace: Option<&mut Vec<Vec<ZLaurent>>>) -> Result<Solution, SeriesError> {
        let eqs = self.equations()?;
        let sweep = self.sweep_order()?;
        let mut values: Vec<ZLaurent> = vec![ZLaurent::zero(order); eqs.len()];
        let mut sweeps = 0;
        let mut s = 0;
        loop {
            sweeps += 1;
            if sweeps > order + 2 {
                return Err(SeriesError::NoConvergence(sweeps));
            }
            let level = s.min(order);
            let mut changed = false;
            for &i in &sweep {
                let mut v = eqs[i].eval(&values, level);
                if let Some((lo, hi)) = self.windows[i] {
                    v = v.clip(lo, hi);
                }
                let v = pad(&v, order);
                if v != values[i] {
                    changed = true;
                    values[i] = v;
                }
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push(values.clone());
            }
            if s >= order && !changed {
                break;
            }
            s += 1;
        }
        Ok(Solution { names: self.names.clone(), values, order, sweeps })
    }

    /// Back-substitution: every equation holds exactly at the solution's order.
    pub fn verify(&self, sol: &Solution) -> Result<(), SeriesError> {
        for (i, e) in self.equations()?.iter().enumerate() {
            let mut v = e.eval(&sol.values, sol.order);
            if let Some((lo, hi)) = self.windows[i] {
                v = v.clip(lo, hi);
            }
            if v != sol.values[i].truncate(sol.order) {
                return Err(SeriesError::Verification(self.names[i].clone()));
            }
        }
        Ok(())
    }
}

/// Re-expresses a value computed at a lower truncation as an order-`order` object.
fn pad(v: &ZLaurent, order: usize) -> ZLaurent {
    let mut out = ZLaurent::zero(order);
    for (e, s) in v.terms() {
        let mut coeffs: Vec<AuxPoly> = s.coeffs().to_vec();
        coeffs.resize(order + 1, AuxPoly::zero());
        out = out.add(&ZLaurent::term(e, GSeries::from_coeffs(coeffs)));
    }
    out
}

/// Solved values of a [`System`].
#[derive(Clone, Debug)]
pub struct Solution {
    pub names: Vec<String>,
    pub values: Vec<ZLaurent>,
    pub order: usize,
    pub sweeps: usize,
}

impl Solution {
    pub fn get(&self, name: &str) -> &ZLaurent {
        let i = self.names.iter().position(|n| n == name).unwrap_or_else(|| panic!("no unknown named {name}"));
        &self.values[i]
    }

    /// The `z^0` coefficient of a scalar unknown.
    pub fn scalar(&self, name: &str) -> GSeries {
        self.get(name).coeff(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::poly::int;

    fn as_ints(s: &GSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.as_constant().unwrap().to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn trivial_constant_system() {
        let mut sys = System::new();
        let r = sys.unknown("R");
        sys.define(r, Expr::one(3));
        let sol = sys.solve(3).unwrap();
        assert_eq!(sol.scalar("R"), GSeries::one(3));
    }

    #[test]
    fn quadratic_tree_equation() {
        // R = 1 + 3 t R^2
        let n = 4;
        let mut sys = System::new();
        let r = sys.unknown("R");
        sys.define(r, Expr::sum(vec![Expr::one(n), Expr::prod(vec![Expr::weight(AuxPoly::int(3), 1, 0, n), Expr::var(r).pow(2)])]));
        let sol = sys.solve(n).unwrap();
        assert_eq!(as_ints(&sol.scalar("R")), vec![1, 3, 18, 135, 1134]);
        sys.verify(&sol).unwrap();
    }

    #[test]
    fn zero_shift_cycle_is_rejected() {
        let mut sys = System::new();
        let a = sys.unknown("A");
        let b = sys.unknown("B");
        sys.define(a, Expr::sum(vec![Expr::one(2), Expr::var(b)]));
        sys.define(b, Expr::var(a));
        assert!(matches!(sys.solve(2), Err(SeriesError::NotContractive(_))));
    }

    #[test]
    fn scaled_weight_shift() {
        let mut sys = System::new();
        let a = sys.unknown("A");
        sys.define(a, Expr::sum(vec![Expr::one(3), Expr::prod(vec![Expr::weight(AuxPoly::constant(int(1)), 1, 0, 3), Expr::var(a)])]));
        let sol = sys.solve(3).unwrap();
        assert_eq!(as_ints(&sol.scalar("A")), vec![1, 1, 1, 1]);
    }
}
