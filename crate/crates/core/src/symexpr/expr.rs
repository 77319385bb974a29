use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops;

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{rat, Poly, Rational};
use super::var::VarRef;
use super::SymError;

/// Default bound on jet order produced by time differentiation.
pub const DEFAULT_JET_CAP: u32 = 3;

/// Exact rational function `numerator / denominator` over model symbols.
///
/// The denominator only ever mentions coordinates at jet order 0. Values are
/// kept canonical: `gcd(numerator, denominator) = 1` and the denominator's
/// leading coefficient is 1, so structurally equal values are equal
/// rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expression {
    num: Poly,
    den: Poly,
}

fn denominator_ok(den: &Poly) -> bool {
    !den.mentions(|v| !v.is_coordinate())
}

impl Expression {
    pub fn zero() -> Self {
        Expression { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Expression { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn var(v: VarRef) -> Self {
        Expression { num: Poly::var(v), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        Expression { num: p, den: Poly::one() }
    }

    /// Builds `num / den` in canonical form.
    pub fn ratio(num: Poly, den: Poly) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        if !denominator_ok(&den) {
            return Err(SymError::DenominatorViolation(format!("{:?}", den)));
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            let k = c.recip();
            return Expression { num: num.scale(&k), den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Self::scaled(num, den)
    }

    /// Makes the denominator's leading coefficient 1; `num/den` must already
    /// be in lowest terms.
    fn scaled(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            return Expression { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let lc = den.leading_coefficient();
        if lc.is_one() {
            Expression { num, den }
        } else {
            let k = lc.recip();
            Expression { num: num.scale(&k), den: den.scale(&k) }
        }
    }

    /// Re-derives the canonical form. Values built through this API are
    /// already canonical, so this is the identity on them.
    pub fn canonicalize(&self) -> Self {
        Self::canonical(self.num.clone(), self.den.clone())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<VarRef> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn mentions(&self, pred: impl Fn(&VarRef) -> bool) -> bool {
        self.num.mentions(&pred) || self.den.mentions(&pred)
    }

    pub fn add(&self, other: &Expression) -> Expression {
        if self.den == other.den {
            return Self::canonical(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_constant() || other.den.is_constant() {
            // a polynomial part never shares a factor with the other denominator
            return Self::scaled(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den));
        }
        let g = gcd(&self.den, &other.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        if g.is_constant() {
            return Self::scaled(num, d1.mul(&other.den));
        }
        // only factors of g can cancel
        let h = gcd(&num, &g);
        let (num, g) = if h.is_constant() {
            (num, g)
        } else {
            (num.div_exact(&h).expect("gcd divides"), g.div_exact(&h).expect("gcd divides"))
        };
        Self::scaled(num, d1.mul(&d2).mul(&g))
    }

    pub fn sub(&self, other: &Expression) -> Expression {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expression {
        Expression { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Expression) -> Expression {
        if self.den.is_constant() && other.den.is_constant() {
            return Expression { num: self.num.mul(&other.num), den: Poly::one() };
        }
        let (n1, d2) = cancel(&self.num, &other.den);
        let (n2, d1) = cancel(&other.num, &self.den);
        Self::scaled(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, k: &Rational) -> Expression {
        if k.is_zero() {
            return Self::zero();
        }
        Expression { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn div(&self, other: &Expression) -> Result<Expression, SymError> {
        if other.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Self::ratio(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, e: u32) -> Expression {
        Expression { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Formal partial derivative treating every other symbol as independent.
    pub fn partial_derivative(&self, v: &VarRef) -> Expression {
        let dn = self.num.derivative(v);
        if self.den.is_constant() {
            return Expression { num: dn, den: self.den.clone() };
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            let (n, d) = cancel(&dn, &self.den);
            return Self::scaled(n, d);
        }
        // with g = gcd(D, D') and D = g s: (N' s - N D'/g) / (D s)
        let g = gcd(&self.den, &dd);
        let s = self.den.div_exact(&g).expect("gcd divides");
        let num = dn.mul(&s).sub(&self.num.mul(&dd.div_exact(&g).expect("gcd divides")));
        let den = self.den.mul(&s);
        // every factor of the new denominator divides D
        let h = gcd(&num, &self.den);
        if h.is_constant() {
            Self::scaled(num, den)
        } else {
            Self::canonical(num.div_exact(&h).expect("gcd divides"), den.div_exact(&h).expect("gcd divides"))
        }
    }

    /// Total time derivative under the default jet cap.
    pub fn total_time_derivative(&self) -> Result<Expression, SymError> {
        self.total_time_derivative_capped(DEFAULT_JET_CAP)
    }

    /// Chain-rule time derivative: each coordinate/jet of order `k`
    /// contributes `∂e/∂x^(k) · x^(k+1)`.
    pub fn total_time_derivative_capped(&self, cap: u32) -> Result<Expression, SymError> {
        let mut out = Expression::zero();
        for v in self.vars() {
            if !v.is_configuration() {
                return Err(SymError::MomentumInTimeDerivative(v));
            }
            if v.jet_order() + 1 > cap {
                return Err(SymError::JetOrderExceeded { var: v, cap });
            }
            let d = self.partial_derivative(&v);
            if !d.is_zero() {
                out = out.add(&d.mul(&Expression::var(v.time_successor())));
            }
        }
        Ok(out)
    }

    /// Simultaneous substitution. Keys must be pairwise distinct.
    pub fn substitute(&self, assignment: &[(VarRef, Expression)]) -> Result<Expression, SymError> {
        if assignment.is_empty() {
            return Ok(self.clone());
        }
        let mut seen = BTreeSet::new();
        for (v, _) in assignment {
            if !seen.insert(v.clone()) {
                return Err(SymError::DuplicateAssignment(v.clone()));
            }
        }
        let num = substitute_poly(&self.num, assignment);
        let den = substitute_poly(&self.den, assignment);
        num.div(&den)
    }

    /// Exact value at a point assigning every symbol that occurs.
    pub fn evaluate(&self, point: &HashMap<VarRef, Rational>) -> Result<Rational, SymError> {
        let d = self.den.eval(point).map_err(SymError::UnassignedVariable)?;
        if d.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        let n = self.num.eval(point).map_err(SymError::UnassignedVariable)?;
        Ok(n / d)
    }

    pub fn evaluate_f64(&self, point: &HashMap<VarRef, f64>) -> Result<f64, SymError> {
        let d = self.den.eval_f64(point).map_err(SymError::UnassignedVariable)?;
        if d == 0.0 {
            return Err(SymError::DivisionByZero);
        }
        let n = self.num.eval_f64(point).map_err(SymError::UnassignedVariable)?;
        Ok(n / d)
    }

    /// Partial evaluation at exact values; the denominator must stay nonzero.
    pub fn partial_evaluate(&self, point: &HashMap<VarRef, Rational>) -> Result<Expression, SymError> {
        Self::ratio(self.num.partial_eval(point), self.den.partial_eval(point))
    }
}

fn substitute_poly(p: &Poly, assignment: &[(VarRef, Expression)]) -> Expression {
    if assignment.iter().all(|(_, e)| e.is_polynomial()) {
        let map: HashMap<VarRef, Poly> = assignment
            .iter()
            .map(|(v, e)| (v.clone(), e.num.scale(&e.den.constant_value().unwrap().recip())))
            .collect();
        return Expression { num: p.substitute(&map), den: Poly::one() };
    }
    // rational images: expand term by term
    let map: HashMap<&VarRef, &Expression> = assignment.iter().map(|(v, e)| (v, e)).collect();
    let mut out = Expression::zero();
    for (m, c) in p.terms() {
        let mut t = Expression::constant(c.clone());
        for (v, e) in m.factors() {
            match map.get(v) {
                Some(img) => t = t.mul(&img.pow(*e)),
                None => {
                    t = t.mul(&Expression::from_poly(Poly::term(
                        super::poly::Monomial::from_factors(vec![(v.clone(), *e)]),
                        Rational::one(),
                    )))
                }
            }
        }
        out = out.add(&t);
    }
    out
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::render::write_expression(self, f)
    }
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expression({self})")
    }
}

impl std::str::FromStr for Expression {
    type Err = SymError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse_expression(s)
    }
}

impl From<VarRef> for Expression {
    fn from(v: VarRef) -> Self {
        Expression::var(v)
    }
}

impl From<i64> for Expression {
    fn from(n: i64) -> Self {
        Expression::int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl ops::$tr<&Expression> for &Expression {
            type Output = Expression;
            fn $method(self, rhs: &Expression) -> Expression {
                Expression::$imp(self, rhs)
            }
        }
        impl ops::$tr<Expression> for Expression {
            type Output = Expression;
            fn $method(self, rhs: Expression) -> Expression {
                Expression::$imp(&self, &rhs)
            }
        }
        impl ops::$tr<&Expression> for Expression {
            type Output = Expression;
            fn $method(self, rhs: &Expression) -> Expression {
                Expression::$imp(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl ops::Neg for Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression::neg(&self)
    }
}

impl ops::Neg for &Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression::neg(self)
    }
}

/// `(n/g, d/g)` with `g = gcd(n, d)`.
fn cancel(n: &Poly, d: &Poly) -> (Poly, Poly) {
    if d.is_constant() {
        return (n.clone(), d.clone());
    }
    let g = gcd(n, d);
    if g.is_constant() {
        (n.clone(), d.clone())
    } else {
        (n.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides"))
    }
}
