//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::var::VarRef;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A power product, kept sorted by variable with strictly positive exponents.
///
/// Ordered graded-lexicographically: total degree first, then the exponent of
/// the smallest variable (in `VarRef` order) decides.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VarRef, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarRef) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_factors(mut factors: Vec<(VarRef, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(VarRef, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn factors(&self) -> &[(VarRef, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &VarRef) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                if f > *e {
                    return None;
                }
                if f < *e {
                    out.push((v.clone(), e - f));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < *v {
                return None;
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Removes `v` entirely, returning its exponent.
    pub fn split_off(&self, v: &VarRef) -> (u32, Monomial) {
        let mut rest = self.0.clone();
        match rest.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => {
                let (_, e) = rest.remove(i);
                (e, Monomial(rest))
            }
            Err(_) => (0, Monomial(rest)),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarRef> {
        self.0.iter().map(|(v, _)| v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.0.cmp(&b.0) {
                // self carries a smaller (higher-ranked) variable other lacks here
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a.1.cmp(&b.1) {
                    Ordering::Equal => {}
                    ord => return ord,
                },
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in canonical form: no zero coefficients, terms sorted by the
/// graded-lex monomial order (the last entry is the leading term).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(v: VarRef) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    /// Coefficient of the monomial `1`.
    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &VarRef) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<VarRef> {
        self.terms.keys().flat_map(|m| m.vars().cloned()).collect()
    }

    pub fn mentions(&self, pred: impl Fn(&VarRef) -> bool) -> bool {
        self.terms.keys().any(|m| m.vars().any(&pred))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        // multiplying by a monomial preserves the term order
        Poly {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut out = Poly::zero();
        for (m, c) in &small.terms {
            for (n, d) in &big.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn derivative(&self, v: &VarRef) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == 0 {
                continue;
            }
            let dm = if e > 1 { rest.mul(&Monomial(vec![(v.clone(), e - 1)])) } else { rest };
            out.add_term(dm, c * rat(e as i64));
        }
        out
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`.
    pub fn coefficients_in(&self, v: &VarRef) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Coefficient of `v^e` (as a polynomial in the remaining variables).
    pub fn coefficient_of_power(&self, v: &VarRef, e: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (f, rest) = m.split_off(v);
            if f == e {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    pub fn from_coefficients_in(v: &VarRef, coeffs: &BTreeMap<u32, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (e, p) in coeffs {
            let vm = Monomial::from_factors(vec![(v.clone(), *e)]);
            for (m, c) in &p.terms {
                out.add_term(m.mul(&vm), c.clone());
            }
        }
        out
    }

    /// Simultaneous substitution of variables by polynomials.
    pub fn substitute(&self, assignment: &HashMap<VarRef, Poly>) -> Poly {
        let mut powers: HashMap<(VarRef, u32), Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = Poly::one();
            for (v, e) in m.factors() {
                match assignment.get(v) {
                    Some(p) => {
                        let pw = powers.entry((v.clone(), *e)).or_insert_with(|| p.pow(*e)).clone();
                        factor = factor.mul(&pw);
                    }
                    None => kept.push((v.clone(), *e)),
                }
            }
            let km = Monomial(kept);
            for (n, d) in factor.terms {
                out.add_term(n.mul(&km), c * d);
            }
        }
        out
    }

    /// Substitutes exact values for some variables, leaving the rest symbolic.
    pub fn partial_eval(&self, point: &HashMap<VarRef, Rational>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept = Vec::new();
            for (v, e) in m.factors() {
                match point.get(v) {
                    Some(x) => coeff *= pow_rational(x, *e),
                    None => kept.push((v.clone(), *e)),
                }
            }
            out.add_term(Monomial(kept), coeff);
        }
        out
    }

    /// Exact value at a point assigning every variable; `None` names the first
    /// unassigned variable.
    pub fn eval(&self, point: &HashMap<VarRef, Rational>) -> Result<Rational, VarRef> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let x = point.get(v).ok_or_else(|| v.clone())?;
                t *= pow_rational(x, *e);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &HashMap<VarRef, f64>) -> Result<f64, VarRef> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rational_to_f64(c);
            for (v, e) in m.factors() {
                let x = point.get(v).ok_or_else(|| v.clone())?;
                t *= x.powi(*e as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Divides by the leading coefficient so the leading term is monic.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Scales so the leading coefficient is positive.
    pub fn positive(&self) -> Poly {
        if self.leading_coefficient().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Multivariate division by an ordered divisor list under the graded-lex
    /// order. Returns the remainder.
    pub fn reduce_by(&self, divisors: &[Poly]) -> Poly {
        let divisors: Vec<&Poly> = divisors.iter().filter(|d| !d.is_zero()).collect();
        let mut p = self.clone();
        let mut rem = Poly::zero();
        while let Some((lm, lc)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let mut divided = false;
            for d in &divisors {
                let (dm, dc) = d.leading_term().unwrap();
                if let Some(q) = lm.div(dm) {
                    let k = &lc / dc;
                    p = p.sub(&d.mul_term(&q, &k));
                    divided = true;
                    break;
                }
            }
            if !divided {
                p.terms.remove(&lm);
                rem.add_term(lm, lc);
            }
        }
        rem
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut p = self.clone();
        let mut q = Poly::zero();
        while let Some((lm, lc)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = lm.div(&dm)?;
            let k = lc / &dc;
            p = p.sub(&d.mul_term(&qm, &k));
            q.add_term(qm, k);
        }
        Some(q)
    }

    /// Rational content: positive rational `c` with `self / c` having coprime
    /// integer coefficients.
    pub fn rational_content(&self) -> Rational {
        use num_integer::Integer;
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rational::one()
        } else {
            Rational::new(num, den)
        }
    }
}

pub fn pow_rational(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // huge numerators/denominators: scale down before converting
        let n = x.numer().bits() as i64 - 1000;
        let d = x.denom().bits() as i64 - 1000;
        let nn = if n > 0 { x.numer() >> n as usize } else { x.numer().clone() };
        let dd = if d > 0 { x.denom() >> d as usize } else { x.denom().clone() };
        nn.to_f64().unwrap_or(f64::NAN) / dd.to_f64().unwrap_or(f64::NAN)
            * 2f64.powi((n.max(0) - d.max(0)) as i32)
    })
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{m:?}")?;
        }
        Ok(())
    }
}
