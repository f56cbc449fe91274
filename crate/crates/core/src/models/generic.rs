//! The Laurent-series system for mobiles with blocked edges, with or without particles.

use crate::planar_map::{BlockMode, Color};
use crate::series::{AuxPoly, Expr, GSeries, Proj, Solution, System, Var, ZLaurent};

use super::spec::{Grading, ModelSpec};
use super::ModelError;

fn konst(s: GSeries, e: i32) -> Expr {
    Expr::Const(ZLaurent::term(e, s))
}

/// Whether the blocked parts are written with the simplified sign rules of `y = -1`.
fn direct_minus_one(spec: &ModelSpec) -> bool {
    spec.particles.is_some() && spec.y == AuxPoly::int(-1)
}

/// Solved generating functions of a model.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub spec: ModelSpec,
    pub order: usize,
    pub system: System,
    pub solution: Solution,
}

/// `sum_k w_k X^(k-1)` for the weights of one colour and charge.
fn face_sum(spec: &ModelSpec, c: Color, charge: usize, x: usize, order: usize) -> Option<Expr> {
    let weights = match c {
        Color::White => &spec.white,
        Color::Black => &spec.black,
    };
    let mut terms = Vec::new();
    for &k in weights.keys() {
        if let Some(w) = spec.face_weight(c, k, charge) {
            let ws = spec.grading.weight_series(&w, order);
            if ws.is_zero() {
                continue;
            }
            terms.push(Expr::prod(vec![konst(ws, 0), Expr::var(x).pow(k as u32 - 1)]));
        }
    }
    (!terms.is_empty()).then(|| Expr::sum(terms))
}

fn or_zero(e: Option<Expr>, order: usize) -> Expr {
    e.unwrap_or_else(|| Expr::Const(ZLaurent::zero(order)))
}

/// Builds the system with unknowns `R`, `Qw{i}`, `Qb{i}`, `Pw{i}`, `Pb{i}`.
///
/// `Pw{i}` (resp. `Pb{i}`) sums the white (resp. black) nodes of charge `i` seen from
/// their root edge; the unmarked sub-mobiles are its non-positive (resp. non-negative) part.
pub fn build_system(spec: &ModelSpec, order: usize) -> Result<System, ModelError> {
    spec.validate()?;
    let mut sys = System::new();
    let charges = spec.max_charge() + 1;
    let r = sys.unknown("R");
    let qw: Vec<usize> = (0..charges).map(|i| sys.unknown(&format!("Qw{i}"))).collect();
    let qb: Vec<usize> = (0..charges).map(|i| sys.unknown(&format!("Qb{i}"))).collect();
    let pw: Vec<usize> = (0..charges).map(|i| sys.unknown(&format!("Pw{i}"))).collect();
    let pb: Vec<usize> = (0..charges).map(|i| sys.unknown(&format!("Pb{i}"))).collect();
    let y = GSeries::constant(spec.y.clone(), order);
    let y_zero = spec.y.is_zero();
    let minus_one = direct_minus_one(spec);

    for i in 0..charges {
        sys.define(pw[i], or_zero(face_sum(spec, Color::White, i, qw[i], order), order));
        sys.define(pb[i], or_zero(face_sum(spec, Color::Black, i, qb[i], order), order));
    }

    for i in 0..charges {
        let mut white = vec![Expr::prod(vec![Expr::var(r), Expr::z(-1, order)])];
        let mut black = vec![Expr::z(1, order)];
        match spec.mode {
            BlockMode::Pairs => {
                // unmarked black nodes never carry a marked edge; a marked one is a
                // bivalent face whose other edge is marked too
                white.push(Expr::var(pb[i]).project(Proj::Plus));
                black.push(Expr::var(pw[i]).project(Proj::Minus));
                if !y_zero {
                    if let Some(w2) = spec.face_weight(Color::Black, 2, 0) {
                        let w2 = spec.grading.weight_series(&w2, order);
                        white.push(Expr::prod(vec![konst(w2.mul(&y), 0), Expr::var(pw[i])]));
                    }
                }
            }
            _ => {
                for j in 0..charges {
                    let blockable = spec.mode == BlockMode::Directed && !y_zero && spec.may_block(i, j);
                    if minus_one && blockable {
                        white.push(Expr::var(pb[j]).project(Proj::StrictNeg).neg(order));
                        black.push(Expr::var(pw[j]).project(Proj::StrictPos).neg(order));
                        continue;
                    }
                    white.push(Expr::var(pb[j]).project(Proj::Plus));
                    black.push(Expr::var(pw[j]).project(Proj::Minus));
                    if blockable {
                        white.push(Expr::prod(vec![konst(y.clone(), 0), Expr::var(pb[j])]));
                        black.push(Expr::prod(vec![konst(y.clone(), 0), Expr::var(pw[j])]));
                    }
                }
            }
        }
        sys.define(qw[i], Expr::sum(white));
        sys.define(qb[i], Expr::sum(black));
    }

    // R = 1 + sum_i [Pw_i]_{z^1} R, with Pw written out so that the weight shift is visible
    let mut l = Vec::new();
    for i in 0..charges {
        if let Some(e) = face_sum(spec, Color::White, i, qw[i], order) {
            l.push(e.project(Proj::Coeff(1)));
        }
    }
    let rhs = if l.is_empty() { Expr::one(order) } else { Expr::sum(vec![Expr::one(order), Expr::prod(vec![Expr::sum(l), Expr::var(r)])]) };
    sys.define(r, rhs);

    if spec.grading == Grading::Faces {
        let w = (spec.max_valence().max(2) as i32 - 1) * order as i32 + 1;
        for &u in qw.iter().chain(&qb).chain(&pw).chain(&pb) {
            sys.set_window(u, -w, w);
        }
    }
    Ok(sys)
}

/// Solves the system of a model to the given order, checking it by back-substitution.
pub fn solve(spec: &ModelSpec, order: usize) -> Result<Bundle, ModelError> {
    let system = build_system(spec, order)?;
    let solution = system.solve(order)?;
    system.verify(&solution)?;
    Ok(Bundle { spec: spec.clone(), order, system, solution })
}

/// The generic model without particles.
pub fn generic_blocked(spec: &ModelSpec, order: usize) -> Result<Bundle, ModelError> {
    if spec.particles.is_some() {
        return Err(ModelError::InvalidSpec("generic_blocked takes no particles".into()));
    }
    solve(spec, order)
}

/// The charged model with `p`-exclusion.
pub fn hard_particles(spec: &ModelSpec, order: usize) -> Result<Bundle, ModelError> {
    if spec.particles.is_none() {
        return Err(ModelError::InvalidSpec("hard_particles needs occupancy weights".into()));
    }
    solve(spec, order)
}

impl Bundle {
    pub fn charges(&self) -> usize {
        self.spec.max_charge() + 1
    }

    pub fn r(&self) -> GSeries {
        self.solution.scalar("R")
    }

    pub fn q_white(&self, i: usize) -> &ZLaurent {
        self.solution.get(&format!("Qw{i}"))
    }

    pub fn q_black(&self, i: usize) -> &ZLaurent {
        self.solution.get(&format!("Qb{i}"))
    }

    pub fn p_white(&self, i: usize) -> &ZLaurent {
        self.solution.get(&format!("Pw{i}"))
    }

    pub fn p_black(&self, i: usize) -> &ZLaurent {
        self.solution.get(&format!("Pb{i}"))
    }

    /// `B_l` for an unmarked black sub-mobile of charge `i`.
    pub fn b(&self, i: usize, l: i32) -> GSeries {
        if l < 0 {
            return GSeries::zero(self.order);
        }
        self.p_black(i).coeff(l)
    }

    /// `W_l` for an unmarked white sub-mobile of charge `i`.
    pub fn w(&self, i: usize, l: i32) -> GSeries {
        if l > 0 {
            return GSeries::zero(self.order);
        }
        self.p_white(i).coeff(l)
    }

    /// Series in the weight variable `v` (usually `g`), whatever the solving grading.
    pub fn in_var(&self, s: &GSeries, v: &str) -> GSeries {
        self.spec.grading.to_var(s, Var::new(v), self.order)
    }

    /// Generating functions with a distinguished non-blocked edge and with a
    /// distinguished blocked edge.
    pub fn edge_rooted(&self) -> (GSeries, GSeries) {
        let order = self.order;
        let spec = &self.spec;
        let c = self.charges();
        let mut nbe = self.r();
        let mut be = GSeries::zero(order);
        let y = &spec.y;
        let cross = |a: &ZLaurent, b: &ZLaurent| a.mul_to(b, order).coeff(0);
        match spec.mode {
            BlockMode::Pairs => {
                let (pb, pw) = (self.p_black(0), self.p_white(0));
                nbe.add_assign(&cross(&pb.project(Proj::Plus), &pw.project(Proj::Minus)));
                if let Some(w2) = spec.face_weight(Color::Black, 2, 0) {
                    let w2 = spec.grading.weight_series(&w2, order).scale_poly(y);
                    be.add_assign(&cross(pw, pw).mul(&w2));
                }
            }
            _ => {
                let minus_one = direct_minus_one(spec);
                for i in 0..c {
                    for j in 0..c {
                        let (pb, pw) = (self.p_black(i), self.p_white(j));
                        let blockable = spec.mode == BlockMode::Directed && !y.is_zero() && spec.may_block(i, j);
                        if minus_one && blockable {
                            // only strictly decreasing marked crossings survive, each with weight -1
                            be.add_assign(&cross(&pb.project(Proj::StrictNeg), &pw.project(Proj::StrictPos)).neg());
                            continue;
                        }
                        nbe.add_assign(&cross(&pb.project(Proj::Plus), &pw.project(Proj::Minus)));
                        if blockable {
                            be.add_assign(&cross(pb, pw).scale_poly(y));
                        }
                    }
                }
            }
        }
        (nbe, be)
    }

    /// Generating function with a distinguished edge of any kind.
    pub fn g_series(&self) -> GSeries {
        let (a, b) = self.edge_rooted();
        a.add(&b)
    }

    /// Duality when white and black weights agree: `Qw(z) = Qb(R/z)` and `R` recovered
    /// from the black series.
    pub fn duality_check(&self) -> bool {
        let spec = &self.spec;
        if spec.particles.is_some() || spec.mode != BlockMode::Directed || spec.white != spec.black {
            return false;
        }
        let order = self.order;
        let r = self.r();
        let Ok(dual) = self.q_black(0).substitute_reciprocal(&r) else {
            return false;
        };
        if dual != self.q_white(0).truncate(order) {
            return false;
        }
        let qb = self.q_black(0);
        let mut alt = GSeries::one(order);
        for (&k, w) in &spec.white {
            let ws = spec.grading.weight_series(w, order);
            let t = qb.pow_to(k as u32 - 1, order).coeff(-1).mul(&ws);
            alt.add_assign(&t);
        }
        alt == r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int;

    fn ints(s: &GSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.as_constant().unwrap().to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn empty_model_is_trivial() {
        let spec = ModelSpec::new(&[], &[], AuxPoly::zero());
        let b = solve(&spec, 3).unwrap();
        assert_eq!(b.r(), GSeries::one(3));
        assert_eq!(b.q_white(0), &ZLaurent::term(-1, GSeries::one(3)));
        assert_eq!(b.q_black(0), &ZLaurent::z_pow(1, 3));
    }

    #[test]
    fn quadrangulations_without_blockings() {
        let b = solve(&ModelSpec::quadrangulation(AuxPoly::zero()), 4).unwrap();
        assert_eq!(ints(&b.r()), vec![1, 3, 18, 135, 1134]);
    }

    #[test]
    fn y_scaling_of_blocked_edges() {
        let b = solve(&ModelSpec::quadrangulation(AuxPoly::var("y")), 2).unwrap();
        let r = b.r();
        // one white face: 3 (1+y)^2
        let one_plus_y = &AuxPoly::one() + &AuxPoly::var("y");
        assert_eq!(r.coefficient(1), &one_plus_y.pow(2).scale(&int(3)));
    }
}
