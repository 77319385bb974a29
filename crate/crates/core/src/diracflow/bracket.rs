use std::collections::BTreeSet;

use crate::symexpr::{Expression, Poly, VarRef};

/// Canonical Poisson bracket over the given coordinates (each paired with its
/// conjugate momentum). Velocities and multipliers are treated as constants.
pub fn poisson_bracket(f: &Expression, g: &Expression, coordinates: &[VarRef]) -> Expression {
    if f.is_polynomial() && g.is_polynomial() {
        return Expression::from_poly(poly_bracket(f.numerator(), g.numerator(), coordinates));
    }
    let mut out = Expression::zero();
    for q in coordinates {
        let p = q.conjugate_momentum();
        let a = f.partial_derivative(q).mul(&g.partial_derivative(&p));
        let b = f.partial_derivative(&p).mul(&g.partial_derivative(q));
        out = out.add(&a.sub(&b));
    }
    out
}

pub fn poly_bracket(f: &Poly, g: &Poly, coordinates: &[VarRef]) -> Poly {
    let mut out = Poly::zero();
    for q in coordinates {
        let p = q.conjugate_momentum();
        let fq = f.derivative(q);
        let gp = if fq.is_zero() { Poly::zero() } else { g.derivative(&p) };
        let fp = f.derivative(&p);
        let gq = if fp.is_zero() { Poly::zero() } else { g.derivative(q) };
        out = out.add(&fq.mul(&gp)).sub(&fp.mul(&gq));
    }
    out
}

/// Every coordinate whose position or momentum occurs in `exprs`.
pub fn phase_coordinates<'a>(exprs: impl IntoIterator<Item = &'a Expression>) -> Vec<VarRef> {
    let mut set = BTreeSet::new();
    for e in exprs {
        for v in e.vars() {
            if v.is_coordinate() || v.is_momentum() {
                set.insert(v.coordinate_of());
            }
        }
    }
    set.into_iter().collect()
}
