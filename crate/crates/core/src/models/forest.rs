//! Blocked edges on quadrangulations: one-way blockings, forests, spanning trees
//! and the even-valent reformulation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::planar_map::BlockMode;
use crate::series::{AuxPoly, Expr, GSeries, Proj, System, ZLaurent};

use super::generic::{solve, Bundle};
use super::spec::ModelSpec;
use super::ModelError;

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `(3n)! / (n! (2n+1)!)`: rooted ternary trees with `n` inner nodes.
pub fn ternary_count(n: u64) -> BigInt {
    factorial(3 * n) / (factorial(n) * factorial(2 * n + 1))
}

/// `(3n)! / (n! n! (n+1)!)`: the coefficients of `F`.
pub fn forest_coefficient(n: u64) -> BigInt {
    factorial(3 * n) / (factorial(n) * factorial(n) * factorial(n + 1))
}

/// Checks the factorization of `forest_coefficient(n)` into a ternary tree, a system
/// of arches on its `2n + 2` leaves, a choice of face and the orientation factor 1/2.
pub fn arch_factorization_holds(n: u64) -> bool {
    let arches = factorial(2 * n + 2) / (factorial(n + 1) * factorial(n + 2));
    let lhs = BigRational::from_integer(forest_coefficient(n));
    let rhs = BigRational::from_integer(ternary_count(n) * arches * BigInt::from(n + 2)) / BigRational::from_integer(BigInt::from(2));
    lhs == rhs
}

/// Solves `q = 1 + x q^3` in the grading variable `x`.
pub fn ternary_kernel(order: usize) -> Result<GSeries, ModelError> {
    let mut sys = System::new();
    let q = sys.unknown("q");
    sys.define(q, Expr::sum(vec![Expr::one(order), Expr::prod(vec![Expr::weight(AuxPoly::one(), 1, 0, order), Expr::var(q).pow(3)])]));
    let sol = sys.solve(order)?;
    sys.verify(&sol)?;
    Ok(sol.scalar("q"))
}

/// `R = 1 + sum_n a_n g^n c(y)^(n-1) d(y)^n R^(n+1)` with `c`, `d` given polynomials.
fn single_equation(order: usize, c: &AuxPoly, d: &AuxPoly) -> Result<GSeries, ModelError> {
    let mut sys = System::new();
    let r = sys.unknown("R");
    let mut terms = vec![Expr::one(order)];
    for n in 1..=order as u64 {
        let a = AuxPoly::constant(BigRational::from_integer(forest_coefficient(n)));
        let w = &(&a * &c.pow(n as u32 - 1)) * &d.pow(n as u32);
        if w.is_zero() {
            continue;
        }
        terms.push(Expr::prod(vec![Expr::weight(w, n as usize, 0, order), Expr::var(r).pow(n as u32 + 1)]));
    }
    sys.define(r, Expr::sum(terms));
    let sol = sys.solve(order)?;
    sys.verify(&sol)?;
    Ok(sol.scalar("R"))
}

fn y() -> AuxPoly {
    AuxPoly::var("y")
}

fn one_plus_y() -> AuxPoly {
    &AuxPoly::one() + &y()
}

/// The single equation for forests, with symbolic `y`.
pub fn forest_equation(order: usize) -> Result<GSeries, ModelError> {
    single_equation(order, &y(), &AuxPoly::one())
}

/// The single equation for one-way blockings, with symbolic `y`.
pub fn one_way_equation(order: usize) -> Result<GSeries, ModelError> {
    single_equation(order, &y(), &one_plus_y().pow(2))
}

/// Solves `Q = R/z + a z + b g Q^3`, `R = 1 + g [Q^3 / z]_0 R`.
fn cubic_reduction(order: usize, a: &AuxPoly, b: &AuxPoly) -> Result<(GSeries, ZLaurent), ModelError> {
    let mut sys = System::new();
    let r = sys.unknown("R");
    let q = sys.unknown("Q");
    sys.define(
        q,
        Expr::sum(vec![
            Expr::prod(vec![Expr::var(r), Expr::z(-1, order)]),
            Expr::weight(a.clone(), 0, 1, order),
            Expr::prod(vec![Expr::weight(b.clone(), 1, 0, order), Expr::var(q).pow(3)]),
        ]),
    );
    sys.define(
        r,
        Expr::sum(vec![
            Expr::one(order),
            Expr::prod(vec![Expr::weight(AuxPoly::one(), 1, 0, order), Expr::var(q).pow(3).project(Proj::Coeff(1)), Expr::var(r)]),
        ]),
    );
    let sol = sys.solve(order)?;
    sys.verify(&sol)?;
    Ok((sol.scalar("R"), sol.get("Q").clone()))
}

/// Results of a quadrangulation model solved three independent ways.
#[derive(Clone, Debug)]
pub struct QuadResult {
    pub bundle: Bundle,
    /// `R` from the single closed equation
    pub r: GSeries,
}

fn agree(name: &str, a: &GSeries, b: &GSeries) -> Result<(), ModelError> {
    if a != b {
        return Err(ModelError::IdentityFailed(format!("{name}: {a:?} vs {b:?}")));
    }
    Ok(())
}

/// Quadrangulations whose edges may be blocked in either direction independently.
pub fn quad_one_way(order: usize) -> Result<QuadResult, ModelError> {
    let bundle = solve(&ModelSpec::quadrangulation(y()), order)?;
    let (r_red, q_red) = cubic_reduction(order, &one_plus_y(), &(&y() * &one_plus_y()))?;
    let r = one_way_equation(order)?;
    agree("generic vs reduced R", &bundle.r(), &r_red)?;
    agree("reduced vs closed R", &r_red, &r)?;
    if bundle.q_white(0) != &q_red {
        return Err(ModelError::IdentityFailed("reduced Q".into()));
    }
    Ok(QuadResult { bundle, r })
}

/// Quadrangulations whose edges are blocked in both directions at once: forests on the dual.
pub fn forest(order: usize) -> Result<QuadResult, ModelError> {
    let bundle = solve(&ModelSpec::quadrangulation(y()).with_mode(BlockMode::Pairs), order)?;
    let (r_red, q_red) = cubic_reduction(order, &AuxPoly::one(), &y())?;
    let r = forest_equation(order)?;
    agree("generic vs reduced R", &bundle.r(), &r_red)?;
    agree("reduced vs closed R", &r_red, &r)?;
    if bundle.q_white(0) != &q_red {
        return Err(ModelError::IdentityFailed("reduced Q".into()));
    }
    Ok(QuadResult { bundle, r })
}

/// The one-way series equals the forest series at `g (1 + y)^2`.
pub fn one_way_substitution_holds(order: usize) -> Result<bool, ModelError> {
    let lhs = one_way_equation(order)?;
    let rhs = forest_equation(order)?.rescale(&one_plus_y().pow(2));
    Ok(lhs == rhs)
}

/// `F(a) = sum_{n >= 1} (3n)!/(n! n! (n+1)!) a^n`.
pub fn spanning_tree_f(order: usize) -> GSeries {
    let mut s = GSeries::zero(order);
    for n in 1..=order {
        s.set_coefficient(n, AuxPoly::constant(BigRational::from_integer(forest_coefficient(n as u64))));
    }
    s
}

/// Checks `R = 1 + F(g y) / y + O(1 / y^2)` on the forest series: at `g^n` the top
/// power of `y` is `y^(n-1)` with coefficient `a_n`.
pub fn spanning_tree_limit_holds(r: &GSeries) -> bool {
    let yv = crate::series::Var::new("y");
    let f = spanning_tree_f(r.order());
    (1..=r.order()).all(|n| {
        let c = r.coefficient(n);
        c.degree_in(yv) as usize == n - 1 && c.coefficient_in(yv, n as u32 - 1) == *f.coefficient(n)
    })
}

/// Maps with a distinguished face and edge, vertices of valence `2k` weighted `v[k]`.
pub fn even_valent(v: &[(usize, AuxPoly)], order: usize) -> Result<GSeries, ModelError> {
    let mut sys = System::new();
    let r = sys.unknown("R");
    let mut terms = vec![Expr::one(order)];
    for (k, w) in v {
        let choose = binomial(2 * *k as u64 - 1, *k as u64);
        let w = w.scale(&BigRational::from_integer(choose));
        let ws = GSeries::regrade(&w, crate::series::Var::new("g"), order);
        if ws.is_zero() {
            continue;
        }
        terms.push(Expr::prod(vec![Expr::Const(ZLaurent::from_gseries(ws)), Expr::var(r).pow(*k as u32)]));
    }
    sys.define(r, Expr::sum(terms));
    let sol = sys.solve(order)?;
    sys.verify(&sol)?;
    Ok(sol.scalar("R"))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Vertex weights turning forests into even-valent maps: `g^(k-1) y^(k-2) (3k-3)!/((k-1)!(2k-1)!)`.
pub fn forest_vertex_weights(order: usize) -> Vec<(usize, AuxPoly)> {
    (2..=order + 1)
        .map(|k| {
            let c = ternary_count(k as u64 - 1);
            let w = AuxPoly::constant(BigRational::from_integer(c)).mul_monomial(&crate::series::Monomial::from_pairs(&[
                (crate::series::Var::new("g"), k as u32 - 1),
                (crate::series::Var::new("y"), k as u32 - 2),
            ]));
            (k, w)
        })
        .collect()
}

/// Ratio test for the radius of `F`: `a_{n+1} / a_n` tends to 27.
pub fn coefficient_ratio(n: u64) -> BigRational {
    BigRational::new(forest_coefficient(n + 1), forest_coefficient(n))
}

/// Exact check of `(3n)!/(n!(2n+1)!)` against the kernel coefficients.
pub fn kernel_matches(order: usize) -> Result<bool, ModelError> {
    let q = ternary_kernel(order)?;
    Ok((0..=order).all(|n| q.coefficient(n).as_constant() == Some(BigRational::from_integer(ternary_count(n as u64)))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_forest_coefficients() {
        let f: Vec<BigInt> = (1..=3).map(forest_coefficient).collect();
        assert_eq!(f, vec![BigInt::from(3), BigInt::from(30), BigInt::from(420)]);
    }

    #[test]
    fn factorization_small() {
        assert!((1..=10).all(arch_factorization_holds));
    }

    fn poly(s: &str) -> AuxPoly {
        AuxPoly::parse(s).unwrap()
    }

    #[test]
    fn forest_expansion() {
        let f = forest(6).unwrap();
        let expected = [
            "1",
            "3",
            "6*(3+5*y)",
            "15*(9+30*y+28*y^2)",
            "18*(63+315*y+570*y^2+385*y^3)",
            "126*(81+540*y+1440*y^2+1855*y^3+1001*y^4)",
            "36*(2673+22275*y+78300*y^2+146970*y^3+149884*y^4+68068*y^5)",
        ];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(f.r.coefficient(n), &poly(e), "g^{n}");
        }
        assert!(spanning_tree_limit_holds(&f.r));
    }

    #[test]
    fn one_way_matches_substitution() {
        quad_one_way(4).unwrap();
        assert!(one_way_substitution_holds(6).unwrap());
    }

    #[test]
    fn even_valent_reproduces_forests() {
        let r = even_valent(&forest_vertex_weights(6), 6).unwrap();
        assert_eq!(r, forest_equation(6).unwrap());
    }

    #[test]
    fn kernel() {
        assert!(kernel_matches(5).unwrap());
    }
}
