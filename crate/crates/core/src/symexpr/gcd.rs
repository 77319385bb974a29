//! Multivariate polynomial gcd over the rationals by recursive primitive
//! pseudo-remainder sequences.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use super::poly::{Poly, Rational};
use super::var::VarRef;

/// Monic gcd (leading coefficient 1 under the graded-lex order). `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.div_exact(b).is_some() {
        return b.monic();
    }
    if b.div_exact(a).is_some() {
        return a.monic();
    }
    gcd_rec(a, b).monic()
}

fn main_variable(a: &Poly, b: &Poly) -> VarRef {
    let va = a.vars();
    let vb = b.vars();
    // prefer a variable both share; either way the smallest in VarRef order
    va.intersection(&vb)
        .next()
        .cloned()
        .or_else(|| va.iter().next().cloned())
        .or_else(|| vb.iter().next().cloned())
        .expect("non-constant input")
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if let Some(g) = gcd_over_private_vars(a, b).or_else(|| gcd_over_private_vars(b, a)) {
        return g;
    }
    let x = main_variable(a, b);
    let da = a.degree_in(&x);
    let db = b.degree_in(&x);
    if da == 0 {
        return gcd_rec(a, &content(b, &x));
    }
    if db == 0 {
        return gcd_rec(&content(a, &x), b);
    }
    let ca = content(a, &x);
    let cb = content(b, &x);
    let c = gcd_rec(&ca, &cb);
    let mut f = a.div_exact(&ca).expect("content divides");
    let mut g = b.div_exact(&cb).expect("content divides");
    if f.degree_in(&x) < g.degree_in(&x) {
        std::mem::swap(&mut f, &mut g);
    }
    let bound = image_degree(&f, &g, &x);
    if bound == Some(0) {
        return c;
    }
    let (pf, pg) = (f.clone(), g.clone());
    let divides_both = |h: &Poly| pf.div_exact(h).is_some() && pg.div_exact(h).is_some();
    loop {
        if bound == Some(g.degree_in(&x)) {
            let h = primitive_part(&g, &x);
            if divides_both(&h) {
                return c.mul(&h);
            }
        }
        let r = pseudo_remainder(&f, &g, &x);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&x) == 0 {
            g = Poly::one();
            break;
        }
        f = g;
        g = primitive_part(&r, &x);
    }
    let g = if g.is_constant() { Poly::one() } else { primitive_part(&g, &x) };
    c.mul(&g)
}

/// When `a` mentions variables absent from `b`, the gcd divides every
/// coefficient of `a` with respect to those variables.
fn gcd_over_private_vars(a: &Poly, b: &Poly) -> Option<Poly> {
    let vb = b.vars();
    let private: Vec<VarRef> = a.vars().into_iter().filter(|v| !vb.contains(v)).collect();
    if private.is_empty() {
        return None;
    }
    let mut groups: BTreeMap<Vec<(VarRef, u32)>, Poly> = BTreeMap::new();
    for (m, c) in a.terms() {
        let (outer, inner): (Vec<_>, Vec<_>) = m.factors().iter().cloned().partition(|(v, _)| private.contains(v));
        groups
            .entry(outer)
            .or_insert_with(Poly::zero)
            .add_term(super::poly::Monomial::from_factors(inner), c.clone());
    }
    let mut coeffs: Vec<Poly> = groups.into_values().collect();
    coeffs.sort_by_key(Poly::len);
    let mut g = b.clone();
    for c in coeffs {
        g = gcd_rec(&g, &c);
        if g.is_constant() {
            return Some(Poly::one());
        }
    }
    Some(g)
}

/// Degree in `x` of the gcd of `f` and `g` after the other variables are
/// fixed at a point where neither leading coefficient vanishes. This bounds
/// the degree of the true gcd from above.
fn image_degree(f: &Poly, g: &Poly, x: &VarRef) -> Option<u32> {
    let others: Vec<VarRef> = f.vars().union(&g.vars()).filter(|v| *v != x).cloned().collect();
    if others.is_empty() {
        return None;
    }
    let lf = f.coefficient_of_power(x, f.degree_in(x));
    let lg = g.coefficient_of_power(x, g.degree_in(x));
    for attempt in 0..4i64 {
        let point: HashMap<VarRef, Rational> = others
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), Rational::from_integer((3 + 7 * attempt + 11 * i as i64).into())))
            .collect();
        if lf.partial_eval(&point).is_zero() || lg.partial_eval(&point).is_zero() {
            continue;
        }
        let d = univariate_gcd(&f.partial_eval(&point), &g.partial_eval(&point), x);
        return Some(d.degree_in(x));
    }
    None
}

/// Euclid's algorithm for polynomials in `x` alone.
fn univariate_gcd(a: &Poly, b: &Poly, x: &VarRef) -> Poly {
    let (mut f, mut g) = (a.clone(), b.clone());
    while !g.is_zero() {
        let dg = g.degree_in(x);
        let lg = g.coefficient_of_power(x, dg).constant_value().expect("univariate");
        let mut r = f;
        while !r.is_zero() && r.degree_in(x) >= dg {
            let dr = r.degree_in(x);
            let k = r.coefficient_of_power(x, dr).constant_value().expect("univariate") / &lg;
            r = r.sub(&g.mul_term(&super::poly::Monomial::from_factors(vec![(x.clone(), dr - dg)]), &k));
        }
        f = g;
        g = if r.is_zero() { r } else { r.monic() };
    }
    f
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content(p: &Poly, x: &VarRef) -> Poly {
    let coeffs = p.coefficients_in(x);
    let mut acc = Poly::zero();
    for c in coeffs.values() {
        acc = if acc.is_zero() { c.clone() } else { gcd_rec(&acc, c) };
        if acc.is_constant() {
            return Poly::one();
        }
    }
    acc.monic()
}

pub fn primitive_part(p: &Poly, x: &VarRef) -> Poly {
    let c = content(p, x);
    let q = p.div_exact(&c).expect("content divides");
    // strip rational scaling so coefficients stay small
    q.scale(&q.rational_content().recip())
}

/// `lc(g)^(deg f - deg g + 1) * f mod g` in the variable `x`.
pub fn pseudo_remainder(f: &Poly, g: &Poly, x: &VarRef) -> Poly {
    let dg = g.degree_in(x);
    let gc: BTreeMap<u32, Poly> = g.coefficients_in(x);
    let lg = gc.get(&dg).cloned().unwrap_or_else(Poly::zero);
    let mut r = f.clone();
    let xm = |e: u32| Poly::term(super::poly::Monomial::from_factors(vec![(x.clone(), e)]), Rational::one());
    while !r.is_zero() && r.degree_in(x) >= dg {
        let dr = r.degree_in(x);
        let lr = r.coefficient_of_power(x, dr);
        r = r.mul(&lg).sub(&g.mul(&lr).mul(&xm(dr - dg)));
    }
    r
}
