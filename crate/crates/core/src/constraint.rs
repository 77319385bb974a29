use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::symexpr::gcd::gcd;
use crate::symexpr::{Expression, Monomial, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Dirac,
    Conjecture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    First,
    Second,
    Unclassified,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassLabel::First => "first",
            ClassLabel::Second => "second",
            ClassLabel::Unclassified => "unclassified",
        })
    }
}

/// A phase-space relation `expr ≈ 0`.
///
/// `expr` is a polynomial in coordinates and momenta, normalized to primitive
/// rational content with leading coefficient +1.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub expr: Expression,
    /// 0 for primary constraints.
    pub generation: u32,
    pub origin: Origin,
    pub class_label: ClassLabel,
}

impl Constraint {
    /// Normalizes `p`; `None` if it is zero.
    pub fn new(p: &Poly, generation: u32, origin: Origin) -> Option<Self> {
        let n = normalize(p);
        if n.is_zero() {
            return None;
        }
        Some(Constraint { expr: Expression::from_poly(n), generation, origin, class_label: ClassLabel::Unclassified })
    }

    pub fn poly(&self) -> &Poly {
        self.expr.numerator()
    }
}

/// Strips rational content and makes the leading coefficient +1. For
/// constraints involving momenta, a common coordinate-polynomial factor is
/// also removed, since it does not change the surface generically.
pub fn normalize(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let p = strip_coordinate_content(p);
    p.scale(&p.rational_content().recip()).monic()
}

fn strip_coordinate_content(p: &Poly) -> Poly {
    if !p.mentions(|v| !v.is_coordinate()) {
        return p.clone();
    }
    let mut groups: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (q, rest): (Vec<_>, Vec<_>) = m.factors().iter().cloned().partition(|(v, _)| v.is_coordinate());
        groups
            .entry(Monomial::from_factors(rest))
            .or_insert_with(Poly::zero)
            .add_term(Monomial::from_factors(q), c.clone());
    }
    let mut g: Option<Poly> = None;
    for c in groups.values() {
        let next = match &g {
            None => c.clone(),
            Some(h) => gcd(h, c),
        };
        if next.is_constant() {
            return p.clone();
        }
        g = Some(next);
    }
    match g {
        Some(g) => p.div_exact(&g).unwrap_or_else(|| p.clone()),
        None => p.clone(),
    }
}
