//! Dominant singularity of the forest series in high precision.
//!
//! With `a = 27 u`, `F(u) + u F'(u) = H(a) - 1` where `H = 2F1(1/3, 2/3; 1; a)`, so
//! the critical point `y = F(u*) + u* F'(u*)` becomes `H(a*) = 1 + y`. `H` is summed
//! from its Taylor series for `a <= 1/2` and from the logarithmic expansion at `a = 1`
//! beyond, which keeps every sum geometrically convergent.

use std::fmt;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use serde::Serialize;

use super::ModelError;

pub type Real = FBig<HalfEven, 2>;

/// Working precision in bits (about 77 decimal digits).
pub const PRECISION: usize = 256;

fn int(n: i64) -> Real {
    Real::from(n).with_precision(PRECISION).value()
}

fn frac(n: i64, d: i64) -> Real {
    int(n) / int(d)
}

fn abs(x: &Real) -> Real {
    if *x < Real::ZERO {
        -x.clone()
    } else {
        x.clone()
    }
}

pub fn real(x: f64) -> Real {
    Real::try_from(x).expect("finite value").with_precision(PRECISION).value()
}

fn eps() -> Real {
    int(2).powi((-(PRECISION as i64) + 4).into())
}

/// `arctan(1/k)` by its alternating series.
fn arctan_inv(k: i64) -> Real {
    let x = frac(1, k);
    let x2 = &x * &x;
    let (mut sum, mut pw, mut n) = (Real::ZERO.with_precision(PRECISION).value(), x, 0i64);
    let tiny = eps();
    loop {
        let term = &pw / int(2 * n + 1);
        if abs(&term) < tiny {
            return sum;
        }
        sum = if n % 2 == 0 { sum + term } else { sum - term };
        pw = &pw * &x2;
        n += 1;
    }
}

fn pi() -> Real {
    int(16) * arctan_inv(5) - int(4) * arctan_inv(239)
}

/// Taylor coefficients `c_n = (1/3)_n (2/3)_n / n!^2 = (3n)! / (n!^3 27^n)`.
struct Coefficients {
    n: i64,
    c: Real,
    /// `2 H_n - sum_{k<n} (1/(1/3+k) + 1/(2/3+k))`
    psi: Real,
}

impl Coefficients {
    fn new() -> Coefficients {
        Coefficients { n: 0, c: int(1), psi: int(0) }
    }

    fn advance(&mut self) {
        let n = self.n;
        self.c = &self.c * frac((3 * n + 1) * (3 * n + 2), 9 * (n + 1) * (n + 1));
        self.psi = &self.psi + frac(2, n + 1) - frac(3, 3 * n + 1) - frac(3, 3 * n + 2);
        self.n += 1;
    }
}

/// Values of `H`, `H'` and `int_0^a H` at one point.
struct HValues {
    h: Real,
    dh: Real,
    integral: Real,
}

fn taylor(a: &Real) -> HValues {
    let mut k = Coefficients::new();
    let (mut h, mut dh, mut integral) = (int(0), int(0), int(0));
    let mut pw = int(1); // a^n
    let tiny = eps();
    loop {
        let n = k.n;
        let t = &k.c * &pw;
        h = &h + &t;
        if n > 0 {
            dh = &dh + &k.c * int(n) * (&pw / a);
        }
        integral = &integral + &t * a / int(n + 1);
        if n > 4 && abs(&t) < tiny {
            break;
        }
        pw = &pw * a;
        k.advance();
    }
    HValues { h, dh, integral }
}

/// Expansion at `a = 1` in `s = 1 - a`, valid for `0 < s <= 1/2`.
fn logarithmic(s: &Real, consts: &Consts) -> HValues {
    let ln_s = s.ln();
    let half = frac(1, 2);
    let ln_half = &consts.ln_half;
    let mut k = Coefficients::new();
    let (mut h, mut dh, mut tail) = (int(0), int(0), int(0));
    let mut pw = int(1); // s^n
    let mut pw_half = int(1);
    let tiny = eps();
    loop {
        let n = k.n;
        let a_n = &k.psi + &consts.three_ln3;
        let t = &k.c * &pw * (&a_n - &ln_s);
        h = &h + &t;
        // d/da = -d/ds applied to c_n s^n (A_n - ln s)
        dh = &dh - &k.c * (&pw / s) * (int(n) * (&a_n - &ln_s) - int(1));
        // int_s^{1/2} sigma^n (A_n - ln sigma) dsigma
        let np1 = int(n + 1);
        let prim = |p: &Real, l: &Real| p / &np1 * (&a_n - l + int(1) / &np1);
        let hi = prim(&(&pw_half * &half), ln_half);
        let lo = prim(&(&pw * s), &ln_s);
        tail = &tail + &k.c * (hi - lo);
        if n > 4 && abs(&t) < tiny && abs(&(&k.c * &pw_half)) < tiny {
            break;
        }
        pw = &pw * s;
        pw_half = &pw_half * &half;
        k.advance();
    }
    let kk = &consts.k;
    HValues { h: kk * &h, dh: kk * &dh, integral: &consts.left + kk * &tail }
}

/// `H` alone, for the bisection.
fn h_only(a: &Real, consts: &Consts) -> Real {
    let tiny = eps();
    let mut k = Coefficients::new();
    let mut h = int(0);
    let mut pw = int(1);
    if *a <= frac(1, 2) {
        loop {
            let t = &k.c * &pw;
            h = &h + &t;
            if k.n > 4 && abs(&t) < tiny {
                return h;
            }
            pw = &pw * a;
            k.advance();
        }
    }
    let s = int(1) - a;
    let ln_s = s.ln();
    loop {
        let t = &k.c * &pw * (&k.psi + &consts.three_ln3 - &ln_s);
        h = &h + &t;
        if k.n > 4 && abs(&t) < tiny {
            return &consts.k * &h;
        }
        pw = &pw * &s;
        k.advance();
    }
}

struct Consts {
    /// `sqrt(3) / (2 pi)`
    k: Real,
    three_ln3: Real,
    ln_half: Real,
    /// `int_0^{1/2} H`
    left: Real,
}

impl Consts {
    fn new() -> Consts {
        let half = frac(1, 2);
        Consts { k: int(3).sqrt() / (int(2) * pi()), three_ln3: int(3) * int(3).ln(), ln_half: half.ln(), left: taylor(&half).integral }
    }
}

fn h_values(a: &Real, consts: &Consts) -> HValues {
    if *a <= frac(1, 2) {
        taylor(a)
    } else {
        logarithmic(&(int(1) - a), consts)
    }
}

/// `F(u) = sum_{n>=1} (3n)!/(n! n! (n+1)!) u^n` for `0 <= u < 1/27`.
pub fn f_closed(u: &Real) -> Real {
    let a = u * int(27);
    if a == int(0) {
        return int(0);
    }
    let v = h_values(&a, &Consts::new());
    &v.integral / &a - int(1)
}

/// `F(u)` by the term recurrence `a_{n+1}/a_n = 3(3n+1)(3n+2)/((n+1)(n+2))`.
pub fn f_series(u: &Real) -> Real {
    let (mut sum, mut t, mut n) = (int(0), u * int(3), 1i64);
    let tiny = eps();
    while abs(&t) > tiny {
        sum = &sum + &t;
        t = &t * u * frac(3 * (3 * n + 1) * (3 * n + 2), (n + 1) * (n + 2));
        n += 1;
        if n > 100_000 {
            break;
        }
    }
    sum
}

/// `F(u)` summing factorials directly, for cross-checking the recurrence.
pub fn f_factorials(u: &Real, terms: u64) -> Real {
    let mut sum = int(0);
    let mut pw = int(1);
    for n in 1..=terms {
        pw = &pw * u;
        sum = &sum + big_to_real(&super::forest::forest_coefficient(n)) * &pw;
    }
    sum
}

fn big_to_real(b: &num_bigint::BigInt) -> Real {
    let s = b.to_string();
    let mut acc = int(0);
    for ch in s.bytes() {
        acc = acc * int(10) + int((ch - b'0') as i64);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// `g* - g ~ (u* - u)^2`, exponent -1/2
    SquareRoot,
    /// the spanning-tree limit, exponent -1
    TreeLog,
}

impl Classification {
    pub fn gamma(self) -> f64 {
        match self {
            Classification::SquareRoot => -0.5,
            Classification::TreeLog => -1.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ForestSingularity {
    pub y_value: Real,
    pub u_star: Real,
    pub g_star: Real,
    pub dg_du: Real,
    pub d2g_du2: Real,
    pub f_at_u_star: Real,
    pub classification: Classification,
}

/// Decimal rendering with `digits` significant digits.
pub fn decimal(x: &Real, digits: usize) -> String {
    let d = x.to_decimal().value();
    let d = d.with_precision(digits).value();
    d.to_string()
}

impl fmt::Display for ForestSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y = {}\nu* = {}\ng* = {}\ndg/du = {}\nd2g/du2 = {}\nclass = {:?} (gamma = {})",
            decimal(&self.y_value, 20),
            decimal(&self.u_star, 30),
            decimal(&self.g_star, 30),
            decimal(&self.dg_du, 5),
            decimal(&self.d2g_du2, 20),
            self.classification,
            self.classification.gamma()
        )
    }
}

#[derive(Serialize)]
struct SingularityJson {
    y: String,
    u_star: String,
    g_star: String,
    dg_du: String,
    d2g_du2: String,
    classification: Classification,
    gamma: f64,
}

impl ForestSingularity {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SingularityJson {
            y: decimal(&self.y_value, 30),
            u_star: decimal(&self.u_star, 40),
            g_star: decimal(&self.g_star, 40),
            dg_du: decimal(&self.dg_du, 10),
            d2g_du2: decimal(&self.d2g_du2, 30),
            classification: self.classification,
            gamma: self.classification.gamma(),
        })
        .expect("plain struct")
    }
}

/// Locates `u*` with `F(u*) + u* F'(u*) = y` by bisection on `a = 27 u` and reads off
/// `g* = u* (y - F(u*)) / y^2` together with the sign conditions.
pub fn forest_singularity(y: &Real, tol: f64) -> Result<ForestSingularity, ModelError> {
    if *y <= int(0) {
        return Err(ModelError::InvalidSpec("y must be positive".into()));
    }
    let consts = Consts::new();
    let target = y + int(1);
    let (mut lo, mut hi) = (int(0), int(1));
    for _ in 0..PRECISION - 8 {
        let mid = (&lo + &hi) / int(2);
        if mid == lo || mid == hi {
            break;
        }
        if h_only(&mid, &consts) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = (&lo + &hi) / int(2);
    let v = h_values(&a, &consts);
    let u = &a / int(27);
    let y2 = y * y;
    let f = &v.integral / &a - int(1);
    let dg_du = (&target - &v.h) / &y2;
    let d2g_du2 = -(int(27) * &v.dh) / &y2;
    let g_star = &u * (y - &f) / &y2;
    let s = ForestSingularity {
        y_value: y.clone(),
        u_star: u.clone(),
        g_star,
        dg_du: dg_du.clone(),
        d2g_du2: d2g_du2.clone(),
        f_at_u_star: f.clone(),
        classification: Classification::SquareRoot,
    };
    let bound = real(tol) * abs(&(&u * &d2g_du2));
    if abs(&dg_du) > bound {
        return Err(ModelError::ToleranceNotMet(format!("|dg/du| = {} above {}", decimal(&dg_du, 5), decimal(&bound, 5))));
    }
    if d2g_du2 >= int(0) || f >= *y || u <= int(0) || u >= frac(1, 27) {
        return Err(ModelError::ToleranceNotMet("sign conditions fail at the critical point".into()));
    }
    Ok(s)
}

/// The spanning-tree limit: `F` itself is singular at `alpha* = 1/27` with a
/// logarithmic correction to `F'`, hence exponent -1.
pub fn spanning_tree_singularity() -> ForestSingularity {
    let u = frac(1, 27);
    let f = f_closed(&(&u * (int(1) - eps())));
    ForestSingularity { y_value: int(0), u_star: u.clone(), g_star: u, dg_du: int(0), d2g_du2: int(0), f_at_u_star: f, classification: Classification::TreeLog }
}
