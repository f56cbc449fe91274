//! Eulerian triangulations with hard particles: the closed system with only a few
//! surviving coefficients.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::series::{AuxPoly, Expr, GSeries, Solution, System, Var, ZLaurent};

use super::ModelError;

/// Constant graded by the exponent of `g`.
pub(crate) fn graded(p: &AuxPoly, order: usize) -> GSeries {
    GSeries::regrade(p, Var::new("g"), order)
}

pub(crate) fn poly(s: &str) -> AuxPoly {
    AuxPoly::parse(s).expect("built-in polynomial")
}

pub(crate) fn c(s: &str, order: usize) -> Expr {
    Expr::Const(ZLaurent::from_gseries(graded(&poly(s), order)))
}

pub(crate) fn v(i: usize) -> Expr {
    Expr::var(i)
}

pub(crate) fn sum(items: Vec<Expr>) -> Expr {
    Expr::sum(items)
}

pub(crate) fn prod(items: Vec<Expr>) -> Expr {
    Expr::prod(items)
}

/// Solution of a closed system: every named coefficient as a series in `g`.
#[derive(Clone, Debug)]
pub struct ClosedBundle {
    pub order: usize,
    pub solution: Solution,
    pub series: BTreeMap<String, GSeries>,
}

impl ClosedBundle {
    pub(crate) fn from_solution(order: usize, solution: Solution) -> ClosedBundle {
        let series = solution.names.iter().map(|n| (n.clone(), solution.scalar(n))).collect();
        ClosedBundle { order, solution, series }
    }

    pub fn get(&self, name: &str) -> &GSeries {
        &self.series[name]
    }

    pub fn r(&self) -> &GSeries {
        self.get("R")
    }

    pub fn g(&self) -> &GSeries {
        self.get("G")
    }
}

/// Solves the hard-particle triangulation system to `g^order`.
///
/// Unknowns follow the surviving coefficients: `B2_0 = g`, `W2_0 = g R^2` and the
/// charged families `B2_1`, `Bt1`, `Bt4` with their white mirrors.
pub fn triangulation_hp(order: usize) -> Result<ClosedBundle, ModelError> {
    let mut s = System::new();
    let r = s.unknown("R");
    let b20 = s.unknown("B2_0");
    let w20 = s.unknown("W2_0");
    let b21 = s.unknown("B2_1");
    let w21 = s.unknown("W2_1");
    let bt1 = s.unknown("Bt1");
    let wt1 = s.unknown("Wt1");
    let bt4 = s.unknown("Bt4");
    let wt4 = s.unknown("Wt4");
    let gg = s.unknown("G");
    let k = |t: &str| c(t, order);

    s.define(b20, k("g"));
    s.define(w20, prod(vec![k("g"), v(r).pow(2)]));
    s.define(b21, prod(vec![k("g*z1"), sum(vec![sum(vec![k("1"), v(wt1)]).pow(2), prod(vec![k("2"), v(w20), v(wt4)])])]));
    s.define(w21, prod(vec![k("g*z1"), sum(vec![sum(vec![v(r), v(bt1)]).pow(2), prod(vec![k("2"), v(b20), v(bt4)])])]));
    s.define(bt1, prod(vec![k("-2*g*z1"), v(w20), sum(vec![k("1"), v(wt1)])]));
    s.define(wt1, prod(vec![k("-2*g*z1"), v(b20), sum(vec![v(r), v(bt1)])]));
    s.define(bt4, prod(vec![k("-g*z1"), v(w20).pow(2)]));
    s.define(wt4, prod(vec![k("-g*z1"), v(b20).pow(2)]));
    s.define(
        r,
        sum(vec![
            k("1"),
            prod(vec![k("g"), v(r), sum(vec![prod(vec![k("2"), v(r), sum(vec![v(b20), v(b21)])]), prod(vec![k("2*z1"), sum(vec![v(r), v(bt1)]), v(b20)])])]),
        ]),
    );
    s.define(
        gg,
        sum(vec![
            v(r),
            prod(vec![v(b20), v(w20)]),
            prod(vec![v(b20), v(w21)]),
            prod(vec![v(b21), v(w20)]),
            prod(vec![k("-1"), v(bt1), v(wt1)]),
            prod(vec![k("-1"), v(bt4), v(wt4)]),
        ]),
    );
    let sol = s.solve(order)?;
    s.verify(&sol)?;
    let bundle = ClosedBundle::from_solution(order, sol);
    check_mirrors(&bundle)?;
    Ok(bundle)
}

fn identity(name: &str, lhs: &GSeries, rhs: &GSeries) -> Result<(), ModelError> {
    if lhs != rhs {
        return Err(ModelError::IdentityFailed(name.into()));
    }
    Ok(())
}

/// `W_{-l} = R^l B_l` between the colours, read with the printed exponents.
fn check_mirrors(b: &ClosedBundle) -> Result<(), ModelError> {
    let r = b.r();
    let r2 = r.pow(2);
    identity("W2_0 = R^2 B2_0", b.get("W2_0"), &r2.mul(b.get("B2_0")))?;
    identity("W2_1 = R^2 B2_1", b.get("W2_1"), &r2.mul(b.get("B2_1")))?;
    identity("R Wt1 = Bt1", &r.mul(b.get("Wt1")), b.get("Bt1"))?;
    identity("R^4 Wt4 = Bt4", &r.pow(4).mul(b.get("Wt4")), b.get("Bt4"))?;
    Ok(())
}

/// Evaluates a polynomial in `g`, `z1` and `R` with `R` replaced by its series.
pub(crate) fn in_r(p: &str, r: &GSeries, order: usize) -> GSeries {
    let mut out = GSeries::zero(order);
    for (e, coef) in poly(p).collect_in(Var::new("R")) {
        out.add_assign(&r.pow(e).mul(&graded(&coef, order)));
    }
    out
}

/// Checks the closed forms in terms of `R` alone.
pub fn hp_closed_forms_hold(b: &ClosedBundle) -> Result<(), ModelError> {
    let order = b.order;
    let r = b.r();
    let den = in_r("(1+2*g^2*z1*R)^2", r, order);
    identity("B2_1 closed form", &b.get("B2_1").mul(&den), &in_r("g*z1*(1-2*g^4*z1*R^2-8*g^6*z1^2*R^3-8*g^8*z1^3*R^4)", r, order))?;
    identity("Bt1 closed form", &b.get("Bt1").mul(&in_r("1+2*g^2*z1*R", r, order)), &in_r("-2*g^2*z1*R^2", r, order))?;
    identity("Bt4 closed form", b.get("Bt4"), &in_r("-g^3*z1*R^4", r, order))?;
    identity(
        "R closed form",
        &r.sub(&GSeries::one(order)).mul(&den),
        &in_r("2*g^2*R^2*(1+2*z1+2*g^2*(2*z1+z1^2)*R+2*g^4*z1^2*R^2-8*g^6*z1^3*R^3-8*g^8*z1^4*R^4)", r, order),
    )?;
    identity("G closed form", &b.g().mul(&den), &in_r("R*(1+4*g^4*z1*R^2+g^2*(R+6*z1*R)-g^6*z1^2*R^3-20*g^8*z1^3*R^4-20*g^10*z1^4*R^5)", r, order))?;
    Ok(())
}

/// Divides the `g^(2n)` coefficient by `n + 2`, counting maps with a root edge only.
/// The vertex map has no edge to root and is dropped.
pub fn hp_rooted(g: &GSeries) -> Result<GSeries, ModelError> {
    let mut out = GSeries::zero(g.order());
    for k in 1..=g.order() {
        let coef = g.coefficient(k);
        if coef.is_zero() {
            continue;
        }
        if k % 2 == 1 {
            return Err(ModelError::NonDivisible(format!("odd power g^{k}")));
        }
        let d = BigRational::from_integer((k / 2 + 2).into());
        out.set_coefficient(k, exact_div(coef, &d)?);
    }
    Ok(out)
}

/// Divides every coefficient by `d`, failing unless the result is integral.
pub(crate) fn exact_div(p: &AuxPoly, d: &BigRational) -> Result<AuxPoly, ModelError> {
    let q = p.scale(&d.recip());
    if q.terms().all(|(_, c)| c.is_integer()) {
        Ok(q)
    } else {
        Err(ModelError::NonDivisible(format!("{p} by {d}")))
    }
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;

    fn check(s: &GSeries, expected: &[&str]) {
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(s.coefficient(n), &poly(e), "g^{n}");
        }
    }

    #[test]
    fn expansions() {
        let b = triangulation_hp(12).unwrap();
        check(
            b.r(),
            &[
                "1",
                "0",
                "2*(1+2*z1)",
                "0",
                "4*(2+8*z1+5*z1^2)",
                "0",
                "4*(10+60*z1+89*z1^2+28*z1^3)",
                "0",
                "32*(7+56*z1+135*z1^2+107*z1^3+21*z1^4)",
                "0",
                "16*(84+840*z1+2828*z1^2+3808*z1^3+1911*z1^4+264*z1^5)",
                "0",
                "64*(132+1584*z1+6870*z1^2+13320*z1^3+11629*z1^4+4088*z1^5+429*z1^6)",
            ],
        );
        check(
            b.g(),
            &[
                "1",
                "0",
                "3*(1+2*z1)",
                "0",
                "12*(1+4*z1+2*z1^2)",
                "0",
                "15*(4+24*z1+33*z1^2+8*z1^3)",
                "0",
                "48*(7+56*z1+130*z1^2+92*z1^3+14*z1^4)",
                "0",
                "168*(12+120*z1+395*z1^2+500*z1^3+220*z1^4+24*z1^5)",
                "0",
                "144*(88+1056*z1+4512*z1^2+8416*z1^3+6801*z1^4+2080*z1^5+176*z1^6)",
            ],
        );
        let rooted = hp_rooted(b.g()).unwrap();
        assert_eq!(rooted.coefficient(2).substitute_value(Var::new("z1"), &BigRational::zero()), AuxPoly::one());
    }

    #[test]
    fn closed_forms() {
        hp_closed_forms_hold(&triangulation_hp(12).unwrap()).unwrap();
    }
}
