//! Reduction of polynomials modulo a constraint set.

use std::collections::BTreeMap;

use crate::constraint::normalize;
use crate::symexpr::{Poly, VarRef};

#[derive(Debug, Clone)]
struct Pivot {
    var: VarRef,
    /// Coordinate-only coefficient of `var`.
    coeff: Poly,
    /// The constraint is `coeff·var + rest`.
    rest: Poly,
}

/// Triangular elimination data for a constraint set.
///
/// Each constraint is first reduced by the pivots found so far. If the
/// remainder is linear in some momentum with a coordinate-only coefficient,
/// that momentum becomes a pivot and is eliminated from later input by
/// (pseudo-)substitution. Remainders with no such momentum may still pivot
/// on a coordinate with a constant coefficient; anything else is kept for
/// graded-lex division.
#[derive(Debug, Clone, Default)]
pub struct WeakReducer {
    pivots: Vec<Pivot>,
    leftovers: Vec<Poly>,
}

impl WeakReducer {
    pub fn new<'a>(constraints: impl IntoIterator<Item = &'a Poly>) -> Self {
        let mut w = WeakReducer::default();
        for c in constraints {
            w.push(c);
        }
        w
    }

    /// Adds a constraint; returns false if it already reduced to zero.
    pub fn push(&mut self, c: &Poly) -> bool {
        let r = self.reduce(c);
        if r.is_zero() {
            return false;
        }
        match choose_pivot(&r) {
            Some((var, coeff)) => {
                let rest = r.sub(&Poly::var(var.clone()).mul(&coeff));
                self.pivots.push(Pivot { var, coeff, rest });
            }
            None => self.leftovers.push(normalize(&r)),
        }
        true
    }

    /// Remainder of `p` modulo the set. Zero means `p` vanishes weakly; a
    /// nonzero remainder is a multiple of `p` by nonvanishing coordinate
    /// factors plus a combination of constraints.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let mut out = p.clone();
        for pv in &self.pivots {
            if out.is_zero() {
                return out;
            }
            out = eliminate(&out, pv);
        }
        if !self.leftovers.is_empty() && !out.is_zero() {
            out = out.reduce_by(&self.leftovers);
        }
        out
    }

    pub fn is_weak_zero(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }
}

/// Candidate ranking: momenta with constant coefficient (lowest symbol),
/// then momenta with coordinate-only coefficient (fewest terms), then
/// coordinates with constant coefficient.
fn choose_pivot(r: &Poly) -> Option<(VarRef, Poly)> {
    let mut best: Option<((u8, usize), VarRef, Poly)> = None;
    for v in r.vars() {
        if r.degree_in(&v) != 1 || v.is_multiplier() {
            continue;
        }
        let c = r.coefficient_of_power(&v, 1);
        let rank = if v.is_momentum() {
            if c.mentions(|w| !w.is_coordinate()) {
                continue;
            }
            if c.is_constant() {
                (0, 0)
            } else {
                (1, c.len())
            }
        } else if v.is_coordinate() && c.is_constant() {
            (2, 0)
        } else {
            continue;
        };
        if best.as_ref().is_none_or(|(b, bv, _)| (rank, &v) < (*b, bv)) {
            best = Some((rank, v, c));
        }
    }
    best.map(|(_, v, c)| (v, c))
}

fn eliminate(p: &Poly, pv: &Pivot) -> Poly {
    let cs: BTreeMap<u32, Poly> = p.coefficients_in(&pv.var);
    let d = match cs.keys().next_back() {
        Some(&d) if d > 0 => d,
        _ => return p.clone(),
    };
    let neg_rest = pv.rest.neg();
    if let Some(k) = pv.coeff.constant_value() {
        let s = neg_rest.scale(&k.recip());
        let mut out = Poly::zero();
        let mut power = Poly::one();
        for j in 0..=d {
            if let Some(c) = cs.get(&j) {
                out = out.add(&c.mul(&power));
            }
            if j < d {
                power = power.mul(&s);
            }
        }
        return out;
    }
    // p·coeff^d with var replaced by -rest/coeff
    let mut out = Poly::zero();
    let mut power = Poly::one();
    for j in 0..=d {
        if let Some(c) = cs.get(&j) {
            out = out.add(&c.mul(&power).mul(&pv.coeff.pow(d - j)));
        }
        if j < d {
            power = power.mul(&neg_rest);
        }
    }
    while !out.is_zero() {
        match out.div_exact(&pv.coeff) {
            Some(q) => out = q,
            None => break,
        }
    }
    out
}
