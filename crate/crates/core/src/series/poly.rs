//! Exact multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use super::SeriesError;

/// Interned variable name. Ordered by name.
#[derive(Clone, Copy, Eq, Hash)]
pub struct Var(&'static str);

fn interner() -> &'static Mutex<HashMap<String, &'static str>> {
    static POOL: OnceLock<Mutex<HashMap<String, &'static str>>> = OnceLock::new();
    POOL.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Var {
    pub fn new(name: &str) -> Var {
        let mut pool = interner().lock().expect("variable pool poisoned");
        if let Some(s) = pool.get(name) {
            return Var(s);
        }
        let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
        pool.insert(name.to_string(), leaked);
        Var(leaked)
    }

    pub fn name(&self) -> &'static str {
        self.0
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0) || self.0 == other.0
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(other.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// Power product of variables, sorted by variable, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 3]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: u32) -> Monomial {
        let mut m = Monomial::one();
        if e > 0 {
            m.0.push((v, e));
        }
        m
    }

    pub fn from_pairs(pairs: &[(Var, u32)]) -> Monomial {
        let mut m = Monomial::one();
        for &(v, e) in pairs {
            m = m.mul(&Monomial::var(v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exps(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |p| p.1)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Removes `v` from the monomial, returning its exponent and the rest.
    pub fn split(&self, v: Var) -> (u32, Monomial) {
        let mut rest = self.clone();
        let mut e = 0;
        rest.0.retain(|(w, k)| {
            if *w == v {
                e = *k;
                false
            } else {
                true
            }
        });
        (e, rest)
    }

    /// Greatest common divisor of two monomials.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(v, e) in self.0.iter() {
            let f = other.exp(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Exact quotient; `None` when `d` does not divide `self`.
    pub fn div(&self, d: &Monomial) -> Option<Monomial> {
        let mut out: SmallVec<[(Var, u32); 3]> = SmallVec::new();
        for &(v, e) in self.0.iter() {
            let f = d.exp(v);
            if f > e {
                return None;
            }
            if e > f {
                out.push((v, e - f));
            }
        }
        for &(v, _) in d.0.iter() {
            if self.exp(v) == 0 {
                return None;
            }
        }
        Some(Monomial(out))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in self.0.iter() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{}", v.name())?;
            } else {
                write!(f, "{}^{}", v.name(), e)?;
            }
        }
        Ok(())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Finite sum of rational multiples of monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AuxPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl AuxPoly {
    pub fn zero() -> AuxPoly {
        AuxPoly::default()
    }

    pub fn one() -> AuxPoly {
        AuxPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> AuxPoly {
        AuxPoly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> AuxPoly {
        AuxPoly::constant(int(n))
    }

    pub fn var(name: &str) -> AuxPoly {
        AuxPoly::term(BigRational::one(), Monomial::var(Var::new(name), 1))
    }

    pub fn term(c: BigRational, m: Monomial) -> AuxPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        AuxPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// The value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &AuxPoly) {
        for (m, c) in other.terms.iter() {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &AuxPoly) {
        for (m, c) in other.terms.iter() {
            self.add_term(m.clone(), -c.clone());
        }
    }

    /// `self += a * b`
    pub fn add_product(&mut self, a: &AuxPoly, b: &AuxPoly) {
        for (ma, ca) in a.terms.iter() {
            for (mb, cb) in b.terms.iter() {
                self.add_term(ma.mul(mb), ca * cb);
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> AuxPoly {
        if c.is_zero() {
            return AuxPoly::zero();
        }
        AuxPoly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> AuxPoly {
        AuxPoly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> AuxPoly {
        let mut acc = AuxPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.exps().iter().map(|p| p.0)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Coefficient of `v^e`, as a polynomial in the remaining variables.
    pub fn coefficient_in(&self, v: Var, e: u32) -> AuxPoly {
        let mut out = AuxPoly::zero();
        for (m, c) in self.terms.iter() {
            let (k, rest) = m.split(v);
            if k == e {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Groups by the exponent of `v`.
    pub fn collect_in(&self, v: Var) -> BTreeMap<u32, AuxPoly> {
        let mut out: BTreeMap<u32, AuxPoly> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let (k, rest) = m.split(v);
            out.entry(k).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Replaces `v` by the polynomial `p`.
    pub fn substitute(&self, v: Var, p: &AuxPoly) -> AuxPoly {
        let mut powers: Vec<AuxPoly> = vec![AuxPoly::one()];
        let mut out = AuxPoly::zero();
        for (m, c) in self.terms.iter() {
            let (k, rest) = m.split(v);
            while powers.len() <= k as usize {
                let next = powers.last().unwrap() * p;
                powers.push(next);
            }
            let piece = powers[k as usize].mul_monomial(&rest).scale(c);
            out.add_assign_ref(&piece);
        }
        out
    }

    pub fn substitute_value(&self, v: Var, value: &BigRational) -> AuxPoly {
        self.substitute(v, &AuxPoly::constant(value.clone()))
    }

    /// Integrates each monomial in `v` over `[0, 1]`.
    pub fn integrate_unit(&self, v: Var) -> AuxPoly {
        let mut out = AuxPoly::zero();
        for (m, c) in self.terms.iter() {
            let (k, rest) = m.split(v);
            out.add_term(rest, c / int(k as i64 + 1));
        }
        out
    }

    /// Divides every monomial by `v`; fails when some monomial lacks it.
    pub fn div_var(&self, v: Var) -> Result<AuxPoly, SeriesError> {
        let mut out = AuxPoly::zero();
        for (m, c) in self.terms.iter() {
            let (k, rest) = m.split(v);
            if k == 0 {
                return Err(SeriesError::NonDivisible(format!("{} by {}", self, v.name())));
            }
            out.add_term(rest.mul(&Monomial::var(v, k - 1)), c.clone());
        }
        Ok(out)
    }

    /// Multiplies each monomial's coefficient by `f(monomial)`.
    pub fn map_coefficients<F: Fn(&Monomial, &BigRational) -> BigRational>(&self, f: F) -> AuxPoly {
        let mut out = AuxPoly::zero();
        for (m, c) in self.terms.iter() {
            out.add_term(m.clone(), f(m, c));
        }
        out
    }

    /// Positive rational content and the common monomial factor.
    pub fn content(&self) -> (BigRational, Monomial) {
        if self.is_zero() {
            return (BigRational::one(), Monomial::one());
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        let mut mono: Option<Monomial> = None;
        for (m, c) in self.terms.iter() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
            mono = Some(match mono {
                None => m.clone(),
                Some(g) => g.gcd(m),
            });
        }
        let mut content = BigRational::new(num, den);
        if self.leading_sign_negative() {
            content = -content;
        }
        (content, mono.unwrap_or_default())
    }

    fn leading_sign_negative(&self) -> bool {
        self.sorted_terms().first().is_some_and(|(_, c)| c.is_negative())
    }

    /// Terms ordered by total degree, then by monomial.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.cmp(b.0)));
        v
    }

    /// Evaluates numerically with the given variable values.
    pub fn eval_f64(&self, values: &dyn Fn(Var) -> f64) -> f64 {
        let mut acc = 0.0;
        for (m, c) in self.terms.iter() {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (v, e) in m.exps() {
                t *= values(*v).powi(*e as i32);
            }
            acc += t;
        }
        acc
    }

    pub fn parse(s: &str) -> Result<AuxPoly, SeriesError> {
        let mut p = Parser { s: s.as_bytes(), i: 0 };
        let v = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(SeriesError::Parse(format!("trailing input in {s:?}")));
        }
        Ok(v)
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for AuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &AuxPoly {
    type Output = AuxPoly;
    fn add(self, rhs: &AuxPoly) -> AuxPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &AuxPoly {
    type Output = AuxPoly;
    fn sub(self, rhs: &AuxPoly) -> AuxPoly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Mul for &AuxPoly {
    type Output = AuxPoly;
    fn mul(self, rhs: &AuxPoly) -> AuxPoly {
        let mut out = AuxPoly::zero();
        out.add_product(self, rhs);
        out
    }
}

impl Neg for &AuxPoly {
    type Output = AuxPoly;
    fn neg(self) -> AuxPoly {
        AuxPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for AuxPoly {
            type Output = AuxPoly;
            fn $f(self, rhs: AuxPoly) -> AuxPoly { (&self).$f(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn err(&self, msg: &str) -> SeriesError {
        SeriesError::Parse(format!("{msg} at offset {} in {:?}", self.i, String::from_utf8_lossy(self.s)))
    }

    fn expr(&mut self) -> Result<AuxPoly, SeriesError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.i += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.i += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.i += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<AuxPoly, SeriesError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.i += 1;
                    let d = self.power()?;
                    let c = d.as_constant().filter(|c| !c.is_zero()).ok_or_else(|| self.err("division by a non-constant"))?;
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<AuxPoly, SeriesError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.ws();
            let start = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.i]).ok().and_then(|t| t.parse().ok()).ok_or_else(|| self.err("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<AuxPoly, SeriesError> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(v)
            }
            Some(b'-') => {
                self.i += 1;
                Ok(-&self.atom()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.s[start..self.i]).unwrap().parse().map_err(|_| self.err("bad integer"))?;
                Ok(AuxPoly::constant(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
                    self.i += 1;
                }
                Ok(AuxPoly::var(std::str::from_utf8(&self.s[start..self.i]).unwrap()))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        let y = AuxPoly::var("y");
        let a = &AuxPoly::one() + &y;
        let b = &AuxPoly::one() - &y;
        assert_eq!(&a * &b, AuxPoly::parse("1 - y^2").unwrap());
    }

    #[test]
    fn substitute_minus_one_kills_factor() {
        let q = AuxPoly::parse("3*g^2 + y*g - 7").unwrap();
        let p = &AuxPoly::parse("1+y").unwrap() * &q;
        assert!(p.substitute_value(Var::new("y"), &int(-1)).is_zero());
    }

    #[test]
    fn parse_and_print_round_trip() {
        let p = AuxPoly::parse("6*(3+5*y) - 1/2*z1^2*y").unwrap();
        let q = AuxPoly::parse(&p.to_string()).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.substitute_value(Var::new("y"), &int(1)).substitute_value(Var::new("z1"), &int(0)), AuxPoly::int(48));
    }

    #[test]
    fn content_and_common_monomial() {
        let p = AuxPoly::parse("108*z1^2 + 216*z1^4 + 108*z1^6").unwrap();
        let (c, m) = p.content();
        assert_eq!(c, int(108));
        assert_eq!(m, Monomial::var(Var::new("z1"), 2));
    }
}
