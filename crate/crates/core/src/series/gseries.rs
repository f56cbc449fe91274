//! Truncated power series in one grading variable with polynomial coefficients.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{int, AuxPoly, Var};
use super::SeriesError;

/// `c_0 + c_1 t + ... + c_N t^N + O(t^{N+1})`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GSeries {
    coeffs: Vec<AuxPoly>,
}

impl GSeries {
    pub fn zero(order: usize) -> GSeries {
        GSeries { coeffs: vec![AuxPoly::zero(); order + 1] }
    }

    pub fn one(order: usize) -> GSeries {
        GSeries::constant(AuxPoly::one(), order)
    }

    pub fn constant(p: AuxPoly, order: usize) -> GSeries {
        let mut s = GSeries::zero(order);
        s.coeffs[0] = p;
        s
    }

    /// `p t^grade`, vanishing when `grade > order`.
    pub fn monomial(grade: usize, p: AuxPoly, order: usize) -> GSeries {
        let mut s = GSeries::zero(order);
        if grade <= order {
            s.coeffs[grade] = p;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<AuxPoly>) -> GSeries {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        GSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> &AuxPoly {
        static ZERO: std::sync::OnceLock<AuxPoly> = std::sync::OnceLock::new();
        self.coeffs.get(n).unwrap_or_else(|| ZERO.get_or_init(AuxPoly::zero))
    }

    pub fn coeffs(&self) -> &[AuxPoly] {
        &self.coeffs
    }

    pub fn set_coefficient(&mut self, n: usize, p: AuxPoly) {
        self.coeffs[n] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(AuxPoly::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> GSeries {
        let mut coeffs: Vec<AuxPoly> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, AuxPoly::zero());
        GSeries { coeffs }
    }

    pub fn add(&self, other: &GSeries) -> GSeries {
        let n = self.order().min(other.order());
        GSeries { coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect() }
    }

    pub fn sub(&self, other: &GSeries) -> GSeries {
        let n = self.order().min(other.order());
        GSeries { coeffs: (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect() }
    }

    pub fn neg(&self) -> GSeries {
        GSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add_assign(&mut self, other: &GSeries) {
        let n = self.order().min(other.order());
        self.coeffs.truncate(n + 1);
        for (a, b) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            a.add_assign_ref(b);
        }
    }

    pub fn scale(&self, c: &BigRational) -> GSeries {
        GSeries { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn scale_poly(&self, p: &AuxPoly) -> GSeries {
        GSeries { coeffs: self.coeffs.iter().map(|c| c * p).collect() }
    }

    pub fn mul(&self, other: &GSeries) -> GSeries {
        self.mul_to(other, self.order().min(other.order()))
    }

    /// Product truncated at `order` (which may be below both operand orders).
    pub fn mul_to(&self, other: &GSeries, order: usize) -> GSeries {
        let order = order.min(self.order()).min(other.order());
        let mut out = GSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j].add_product(a, b);
                }
            }
        }
        out
    }

    /// `acc += self * other` truncated at `acc`'s order.
    pub fn add_product_into(acc: &mut GSeries, a: &GSeries, b: &GSeries) {
        let order = acc.order();
        for (i, x) in a.coeffs.iter().enumerate().take(order + 1) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(order + 1 - i) {
                if !y.is_zero() {
                    acc.coeffs[i + j].add_product(x, y);
                }
            }
        }
    }

    pub fn pow(&self, k: u32) -> GSeries {
        let mut acc = GSeries::one(self.order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `1 / (1 - self)`; needs a vanishing constant term.
    pub fn inverse_of_one_minus(&self) -> Result<GSeries, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonInvertible(format!("constant term {} is not zero", self.coeffs[0])));
        }
        let n = self.order();
        let mut out = GSeries::one(n);
        for k in 1..=n {
            let mut c = AuxPoly::zero();
            for i in 1..=k {
                c.add_product(&self.coeffs[i], &out.coeffs[k - i]);
            }
            out.coeffs[k] = c;
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational.
    pub fn inverse(&self) -> Result<GSeries, SeriesError> {
        let c0 = self.coeffs[0]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| SeriesError::NonInvertible(format!("constant term {} is not a unit", self.coeffs[0])))?;
        let inv0 = c0.recip();
        let n = self.order();
        let mut out = GSeries::constant(AuxPoly::constant(inv0.clone()), n);
        for k in 1..=n {
            let mut c = AuxPoly::zero();
            for i in 1..=k {
                c.add_product(&self.coeffs[i], &out.coeffs[k - i]);
            }
            out.coeffs[k] = c.scale(&-inv0.clone());
        }
        Ok(out)
    }

    /// Derivative in the grading variable; the order drops by one.
    pub fn derivative(&self) -> GSeries {
        if self.order() == 0 {
            return GSeries::zero(0);
        }
        GSeries { coeffs: (1..=self.order()).map(|k| self.coeffs[k].scale(&int(k as i64))).collect() }
    }

    /// Multiplies by the grading variable.
    pub fn shift_up(&self) -> GSeries {
        let mut coeffs = vec![AuxPoly::zero()];
        coeffs.extend(self.coeffs.iter().cloned());
        GSeries { coeffs }
    }

    pub fn substitute(&self, v: Var, p: &AuxPoly) -> GSeries {
        GSeries { coeffs: self.coeffs.iter().map(|c| c.substitute(v, p)).collect() }
    }

    pub fn map<F: Fn(usize, &AuxPoly) -> AuxPoly>(&self, f: F) -> GSeries {
        GSeries { coeffs: self.coeffs.iter().enumerate().map(|(k, c)| f(k, c)).collect() }
    }

    /// Sum of all coefficients, i.e. the grading variable set to 1.
    pub fn flatten(&self) -> AuxPoly {
        let mut acc = AuxPoly::zero();
        for c in &self.coeffs {
            acc.add_assign_ref(c);
        }
        acc
    }

    /// Re-grades a flattened polynomial by the exponent of `v`, keeping `v^0..=v^order`.
    pub fn regrade(p: &AuxPoly, v: Var, order: usize) -> GSeries {
        let mut s = GSeries::zero(order);
        for (e, c) in p.collect_in(v) {
            if (e as usize) <= order {
                s.coeffs[e as usize] = c;
            }
        }
        s
    }

    /// Composition `self(t * a)` for a polynomial `a` (as `t -> a t`).
    pub fn rescale(&self, a: &AuxPoly) -> GSeries {
        let mut pw = AuxPoly::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c * &pw);
            pw = &pw * a;
        }
        GSeries { coeffs }
    }

    pub fn is_one_plus_higher(&self) -> bool {
        self.coeffs[0].as_constant().is_some_and(|c| c.is_one())
    }

    pub fn fmt_with(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            parts.push(if t.is_empty() { format!("{c}") } else { format!("({c})*{t}") });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for GSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(t^{})", self.fmt_with("t"), self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &GSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.as_constant().unwrap().to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn geometric_series() {
        let g = GSeries::monomial(1, AuxPoly::one(), 3);
        assert_eq!(ints(&g.inverse_of_one_minus().unwrap()), vec![1, 1, 1, 1]);
    }

    #[test]
    fn inverse_round_trip() {
        let s = GSeries::from_coeffs(vec![AuxPoly::int(2), AuxPoly::var("y"), AuxPoly::int(3)]);
        let p = s.mul(&s.inverse().unwrap());
        assert_eq!(p, GSeries::one(2));
    }

    #[test]
    fn non_invertible() {
        let s = GSeries::from_coeffs(vec![AuxPoly::int(1), AuxPoly::int(1)]);
        assert!(matches!(s.inverse_of_one_minus(), Err(SeriesError::NonInvertible(_))));
    }
}
