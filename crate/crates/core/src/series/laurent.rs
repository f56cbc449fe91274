//! Laurent polynomials in `z` with truncated-series coefficients.

use std::collections::BTreeMap;
use std::fmt;

use super::gseries::GSeries;
use super::poly::AuxPoly;
use super::SeriesError;

/// Projection selectors on z-exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Proj {
    /// exponents >= 0
    Plus,
    /// exponents <= 0
    Minus,
    /// exponent 0
    Zero,
    /// exponents < 0
    StrictNeg,
    /// exponents > 0
    StrictPos,
    /// coefficient of `z^l`, returned at exponent 0
    Coeff(i32),
}

impl Proj {
    fn keeps(self, e: i32) -> bool {
        match self {
            Proj::Plus => e >= 0,
            Proj::Minus => e <= 0,
            Proj::Zero => e == 0,
            Proj::StrictNeg => e < 0,
            Proj::StrictPos => e > 0,
            Proj::Coeff(l) => e == l,
        }
    }
}

/// `sum_e c_e z^e` with finitely many nonzero `c_e`, all truncated at a common order.
#[derive(Clone, PartialEq, Eq)]
pub struct ZLaurent {
    order: usize,
    terms: BTreeMap<i32, GSeries>,
}

impl ZLaurent {
    pub fn zero(order: usize) -> ZLaurent {
        ZLaurent { order, terms: BTreeMap::new() }
    }

    /// `s z^e`.
    pub fn term(e: i32, s: GSeries) -> ZLaurent {
        let order = s.order();
        let mut out = ZLaurent::zero(order);
        if !s.is_zero() {
            out.terms.insert(e, s);
        }
        out
    }

    pub fn from_gseries(s: GSeries) -> ZLaurent {
        ZLaurent::term(0, s)
    }

    /// `z^e` with unit coefficient.
    pub fn z_pow(e: i32, order: usize) -> ZLaurent {
        ZLaurent::term(e, GSeries::one(order))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &GSeries)> {
        self.terms.iter().map(|(e, s)| (*e, s))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponent_range(&self) -> Option<(i32, i32)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    fn insert_add(&mut self, e: i32, s: GSeries) {
        if s.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(s);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&s);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn truncate(&self, order: usize) -> ZLaurent {
        let mut out = ZLaurent::zero(order);
        for (e, s) in self.terms.iter() {
            out.insert_add(*e, s.truncate(order));
        }
        out
    }

    pub fn coeff(&self, e: i32) -> GSeries {
        self.terms.get(&e).cloned().unwrap_or_else(|| GSeries::zero(self.order))
    }

    pub fn add(&self, other: &ZLaurent) -> ZLaurent {
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for (e, s) in other.terms.iter() {
            out.insert_add(*e, s.truncate(order));
        }
        out
    }

    pub fn sub(&self, other: &ZLaurent) -> ZLaurent {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ZLaurent {
        ZLaurent { order: self.order, terms: self.terms.iter().map(|(e, s)| (*e, s.neg())).collect() }
    }

    pub fn scale(&self, s: &GSeries) -> ZLaurent {
        let order = self.order.min(s.order());
        let mut out = ZLaurent::zero(order);
        for (e, c) in self.terms.iter() {
            out.insert_add(*e, c.mul_to(s, order));
        }
        out
    }

    pub fn scale_poly(&self, p: &AuxPoly) -> ZLaurent {
        let mut out = ZLaurent::zero(self.order);
        for (e, c) in self.terms.iter() {
            out.insert_add(*e, c.scale_poly(p));
        }
        out
    }

    pub fn mul(&self, other: &ZLaurent) -> ZLaurent {
        self.mul_to(other, self.order.min(other.order))
    }

    /// Product truncated at grading order `order`.
    pub fn mul_to(&self, other: &ZLaurent, order: usize) -> ZLaurent {
        let order = order.min(self.order).min(other.order);
        let mut acc: BTreeMap<i32, GSeries> = BTreeMap::new();
        for (ea, a) in self.terms.iter() {
            let va = match a.valuation() {
                Some(v) if v <= order => v,
                _ => continue,
            };
            for (eb, b) in other.terms.iter() {
                match b.valuation() {
                    Some(vb) if va + vb <= order => {}
                    _ => continue,
                }
                let slot = acc.entry(ea + eb).or_insert_with(|| GSeries::zero(order));
                GSeries::add_product_into(slot, a, b);
            }
        }
        ZLaurent { order, terms: acc.into_iter().filter(|(_, s)| !s.is_zero()).collect() }
    }

    pub fn pow(&self, k: u32) -> ZLaurent {
        let mut acc = ZLaurent::z_pow(0, self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn pow_to(&self, k: u32, order: usize) -> ZLaurent {
        let mut acc = ZLaurent::z_pow(0, order.min(self.order));
        for _ in 0..k {
            acc = acc.mul_to(self, order);
        }
        acc
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i32) -> ZLaurent {
        ZLaurent { order: self.order, terms: self.terms.iter().map(|(e, s)| (e + k, s.clone())).collect() }
    }

    pub fn project(&self, p: Proj) -> ZLaurent {
        let mut out = ZLaurent::zero(self.order);
        for (e, s) in self.terms.iter() {
            if p.keeps(*e) {
                let target = if let Proj::Coeff(_) = p { 0 } else { *e };
                out.insert_add(target, s.clone());
            }
        }
        out
    }

    /// Drops exponents outside `[lo, hi]`.
    pub fn clip(&self, lo: i32, hi: i32) -> ZLaurent {
        ZLaurent { order: self.order, terms: self.terms.range(lo..=hi).map(|(e, s)| (*e, s.clone())).collect() }
    }

    /// `sum_e c_e r^e z^{-e}`, i.e. the substitution `z -> r / z`.
    pub fn substitute_reciprocal(&self, r: &GSeries) -> Result<ZLaurent, SeriesError> {
        let order = self.order.min(r.order());
        let r = r.truncate(order);
        let rinv = r.inverse()?;
        let mut out = ZLaurent::zero(order);
        for (e, s) in self.terms.iter() {
            let base = if *e >= 0 { &r } else { &rinv };
            let f = base.pow(e.unsigned_abs());
            out.insert_add(-e, s.mul_to(&f, order));
        }
        Ok(out)
    }

    pub fn map_coeffs<F: Fn(&GSeries) -> GSeries>(&self, f: F) -> ZLaurent {
        let mut out = ZLaurent::zero(self.order);
        for (e, s) in self.terms.iter() {
            out.insert_add(*e, f(s));
        }
        out
    }
}

impl fmt::Debug for ZLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(e, s)| format!("[{}]*z^{}", s.fmt_with("t"), e)).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projections_of_z_plus_inverse() {
        let q = ZLaurent::z_pow(1, 2).add(&ZLaurent::z_pow(-1, 2));
        assert_eq!(q.project(Proj::Plus), ZLaurent::z_pow(1, 2));
        assert_eq!(q.project(Proj::Minus), ZLaurent::z_pow(-1, 2));
        assert!(q.project(Proj::Zero).is_zero());
        assert_eq!(q.project(Proj::Coeff(-1)), ZLaurent::z_pow(0, 2));
    }

    #[test]
    fn square_of_binomial() {
        let q = ZLaurent::z_pow(1, 1).add(&ZLaurent::z_pow(-1, 1));
        let sq = q.pow(2);
        assert_eq!(sq.coeff(0), GSeries::constant(AuxPoly::int(2), 1));
        assert_eq!(sq.coeff(2), GSeries::one(1));
    }
}
