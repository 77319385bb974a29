use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::expr::Expression;
use super::poly::{Monomial, Poly, Rational};

fn write_monomial(m: &Monomial, f: &mut impl Write) -> fmt::Result {
    for (i, (v, e)) in m.factors().iter().enumerate() {
        if i > 0 {
            f.write_char('*')?;
        }
        write!(f, "{v}")?;
        if *e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

fn write_magnitude(c: &Rational, f: &mut impl Write) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

/// Terms in descending monomial order, leading term first.
pub(crate) fn write_poly(p: &Poly, f: &mut impl Write) -> fmt::Result {
    if p.is_zero() {
        return f.write_char('0');
    }
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => f.write_char('-')?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let mag = c.abs();
        if m.is_one() {
            write_magnitude(&mag, f)?;
        } else {
            if !mag.is_one() {
                write_magnitude(&mag, f)?;
                f.write_char('*')?;
            }
            write_monomial(m, f)?;
        }
    }
    Ok(())
}

fn needs_parens(p: &Poly) -> bool {
    p.len() > 1 || p.terms().next().is_some_and(|(m, c)| !m.is_one() && (!c.is_one() || m.factors().len() > 1))
}

pub(crate) fn write_expression(e: &Expression, f: &mut impl Write) -> fmt::Result {
    if e.is_polynomial() {
        return write_poly(e.numerator(), f);
    }
    let n = e.numerator();
    if n.len() > 1 {
        f.write_char('(')?;
        write_poly(n, f)?;
        f.write_char(')')?;
    } else {
        write_poly(n, f)?;
    }
    f.write_char('/')?;
    let d = e.denominator();
    if needs_parens(d) {
        f.write_char('(')?;
        write_poly(d, f)?;
        f.write_char(')')
    } else {
        write_poly(d, f)
    }
}
