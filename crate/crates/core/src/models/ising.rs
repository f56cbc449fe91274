//! Ising spins on quadrangulations as hard particles on bivalent faces.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::series::{AuxPoly, GSeries, System, Var};

use super::hp::{c, exact_div, in_r, poly, prod, sum, v, ClosedBundle};
use super::ModelError;

/// Solves the Ising closed system to `g^order`.
pub fn ising(order: usize) -> Result<ClosedBundle, ModelError> {
    let mut s = System::new();
    let r = s.unknown("R");
    let names = ["B3_0", "W3_0", "B1_0", "W1_0", "Bt3", "Wt3", "Bt1", "Wt1", "B3_1", "W3_1", "B1_1", "W1_1", "G"];
    let ids: Vec<usize> = names.iter().map(|n| s.unknown(n)).collect();
    let [b30, w30, b10, w10, bt3, wt3, bt1, wt1, b31, w31, b11, w11, gg] = ids[..] else { unreachable!() };
    let k = |t: &str| c(t, order);

    s.define(b30, k("g"));
    s.define(w30, prod(vec![k("g"), v(r).pow(3)]));
    s.define(b10, prod(vec![k("3*g"), sum(vec![v(w10), v(w11)])]));
    s.define(w10, prod(vec![k("3*g"), v(r).pow(2), sum(vec![v(b10), v(b11)])]));
    s.define(bt3, prod(vec![k("-z1"), v(w30)]));
    s.define(wt3, prod(vec![k("-z1"), v(b30)]));
    s.define(bt1, prod(vec![k("-z1"), v(w10)]));
    s.define(wt1, prod(vec![k("-z1"), v(b10)]));
    s.define(b31, prod(vec![k("z1"), v(wt3)]));
    s.define(w31, prod(vec![k("z1"), v(bt3)]));
    s.define(b11, prod(vec![k("z1"), sum(vec![k("1"), v(wt1)])]));
    s.define(w11, prod(vec![k("z1"), sum(vec![v(r), v(bt1)])]));
    s.define(
        r,
        sum(vec![
            k("1"),
            prod(vec![
                v(r),
                sum(vec![
                    prod(vec![k("3*g"), v(r).pow(2), sum(vec![v(b30), v(b31)])]),
                    prod(vec![k("3*g"), v(r), sum(vec![v(b10), v(b11)]).pow(2)]),
                    prod(vec![k("z1"), v(b10)]),
                ]),
            ]),
        ]),
    );
    s.define(
        gg,
        sum(vec![
            v(r),
            prod(vec![v(b10), v(w10)]),
            prod(vec![v(b30), v(w30)]),
            prod(vec![v(b11), v(w10)]),
            prod(vec![v(b31), v(w30)]),
            prod(vec![v(b10), v(w11)]),
            prod(vec![v(b30), v(w31)]),
            prod(vec![k("-1"), v(bt1), v(wt1)]),
            prod(vec![k("-1"), v(bt3), v(wt3)]),
        ]),
    );
    let sol = s.solve(order)?;
    s.verify(&sol)?;
    let b = ClosedBundle::from_solution(order, sol);
    check_mirrors(&b)?;
    Ok(b)
}

fn identity(name: &str, lhs: &GSeries, rhs: &GSeries) -> Result<(), ModelError> {
    if lhs != rhs {
        return Err(ModelError::IdentityFailed(name.into()));
    }
    Ok(())
}

fn check_mirrors(b: &ClosedBundle) -> Result<(), ModelError> {
    let r = b.r();
    for (w, bl, l) in [("W1_0", "B1_0", 1), ("W3_0", "B3_0", 3), ("W1_1", "B1_1", 1), ("W3_1", "B3_1", 3)] {
        identity(w, b.get(w), &r.pow(l).mul(b.get(bl)))?;
    }
    identity("Wt1", &r.mul(b.get("Wt1")), b.get("Bt1"))?;
    identity("Wt3", &r.pow(3).mul(b.get("Wt3")), b.get("Bt3"))?;
    Ok(())
}

/// Checks the closed forms in `R`, the rational recursion and its older equivalent form.
pub fn ising_closed_forms_hold(b: &ClosedBundle) -> Result<(), ModelError> {
    let order = b.order;
    let r = b.r();
    let d1 = in_r("1-3*g*(1-z1^2)*R", r, order);
    let d2 = d1.mul(&d1);
    identity("B3_0", b.get("B3_0"), &in_r("g", r, order))?;
    identity("B1_0", &b.get("B1_0").mul(&d1), &in_r("3*g*z1*R", r, order))?;
    identity("B3_1", b.get("B3_1"), &in_r("-g*z1^2", r, order))?;
    identity("B1_1", &b.get("B1_1").mul(&d1), &in_r("z1-3*g*z1*R", r, order))?;
    identity("Bt3", b.get("Bt3"), &in_r("-g*z1*R^3", r, order))?;
    identity("Bt1", &b.get("Bt1").mul(&d1), &in_r("-3*g*z1^2*R^2", r, order))?;
    identity(
        "R recursion",
        &r.sub(&GSeries::one(order)).mul(&d2),
        &in_r("3*g*R^2*(2*z1^2-6*g^2*R^2*(1-z1^2)^2+9*g^3*R^3*(1-z1^2)^3+g*R*(1-4*z1^2+3*z1^4))", r, order),
    )?;
    // R/(1-z1^2) = 1 + 3 g^2 (1-z1^2) R^3 + z1^2/(1-z1^2) R/d^2, cleared of denominators
    let lhs = r.mul(&d2);
    let rhs = in_r("(1-z1^2)*(1+3*g^2*(1-z1^2)*R^3)", r, order).mul(&d2).add(&in_r("z1^2*R", r, order));
    identity("older form", &lhs, &rhs)?;
    identity(
        "G closed form",
        &b.g().mul(&d2),
        &in_r("R*(1+10*g^2*R^2*(1-3*z1^2)-6*g*R*(1-2*z1^2)+9*g^4*R^4*(1-z1^2)^2*(1-3*z1^2)-6*g^3*R^3*(1-4*z1^2+3*z1^4))", r, order),
    )?;
    Ok(())
}

/// Rooted quadrangulations with Ising spins: the coefficient of `g^n z1^m` in `G`
/// times `4n / ((n+2)(2n+m))`.
pub fn ising_rooted(g: &GSeries) -> Result<GSeries, ModelError> {
    let z1 = Var::new("z1");
    let mut out = GSeries::zero(g.order());
    for n in 1..=g.order() {
        let mut acc = AuxPoly::zero();
        for (m, coef) in g.coefficient(n).collect_in(z1) {
            let f = BigRational::new(BigInt::from(4 * n), BigInt::from((n + 2) * (2 * n + m as usize)));
            let scaled = exact_div(&coef, &f.recip())?;
            acc = &acc + &(&scaled * &AuxPoly::var("z1").pow(m));
        }
        out.set_coefficient(n, acc);
    }
    Ok(out)
}

/// The same transform written as `4 g d/dg` of a double integral over `alpha`, `beta`.
pub fn ising_rooted_integral(g: &GSeries) -> Result<GSeries, ModelError> {
    let (gv, z1, a, bt) = (Var::new("g"), Var::new("z1"), Var::new("alpha"), Var::new("beta"));
    let order = g.order();
    let flat = g.sub(&GSeries::one(order)).rescale(&AuxPoly::var("g")).flatten();
    let sub = flat.substitute(gv, &poly("beta*alpha^2*g")).substitute(z1, &poly("alpha*z1"));
    let integrand = (&sub * &AuxPoly::var("beta")).div_var(a)?;
    let integral = integrand.integrate_unit(bt).integrate_unit(a);
    let series = GSeries::regrade(&integral, gv, order);
    Ok(series.map(|n, c| c.scale(&BigRational::from_integer(BigInt::from(4 * n)))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(s: &GSeries, expected: &[&str]) {
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(s.coefficient(n), &poly(e), "g^{n}");
        }
    }

    #[test]
    fn expansions() {
        let b = ising(6).unwrap();
        check(
            b.r(),
            &[
                "1",
                "6*z1^2",
                "3*(1+8*z1^2+15*z1^4)",
                "18*z1^2*(11+28*z1^2+21*z1^4)",
                "27*(1+31*z1^2+229*z1^4+285*z1^6+126*z1^8)",
                "54*z1^2*(97+907*z1^2+2521*z1^4+1929*z1^6+594*z1^8)",
                "81*(4+279*z1^2+4833*z1^4+19958*z1^6+30678*z1^8+16419*z1^10+3861*z1^12)",
            ],
        );
        check(
            b.g(),
            &[
                "1",
                "12*z1^2",
                "4*(1+12*z1^2+18*z1^4)",
                "180*z1^2*(2+5*z1^2+3*z1^4)",
                "18*(2+85*z1^2+624*z1^4+693*z1^6+252*z1^8)",
                "756*z1^2*(12+119*z1^2+312*z1^4+207*z1^6+54*z1^8)",
                "432*(1+91*z1^2+1642*z1^4+6681*z1^6+9450*z1^8+4356*z1^10+891*z1^12)",
            ],
        );
        let h = ising_rooted(b.g()).unwrap();
        check(
            &h,
            &[
                "0",
                "4*z1^2",
                "2*(1+8*z1^2+9*z1^4)",
                "108*z1^2*(1+2*z1^2+z1^4)",
                "12*(1+34*z1^2+208*z1^4+198*z1^6+63*z1^8)",
                "216*z1^2*(10+85*z1^2+195*z1^4+115*z1^6+27*z1^8)",
                "54*(2+156*z1^2+2463*z1^4+8908*z1^6+11340*z1^8+4752*z1^10+891*z1^12)",
            ],
        );
        assert_eq!(ising_rooted_integral(b.g()).unwrap(), h);
    }

    #[test]
    fn closed_forms() {
        ising_closed_forms_hold(&ising(6).unwrap()).unwrap();
    }
}
