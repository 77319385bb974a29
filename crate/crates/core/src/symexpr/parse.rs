//! Recursive-descent parser for the infix expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | symbol | 'p(' name ')' | 'mult(' name ')' | '(' expr ')'
//! symbol := name '\''*
//! name   := ident ('[' integer (',' integer)* ']')?
//! ```

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::expr::Expression;
use super::poly::Rational;
use super::var::VarRef;
use super::SymError;

/// Why a name could not be turned into a symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolveError {
    UnknownSymbol,
    IndexOutOfRange,
}

/// Maps textual names to symbols. `primes` counts trailing `'` marks.
pub trait Resolve {
    fn coordinate(&self, name: &str, indices: &[u32], primes: u32) -> Result<VarRef, ResolveError>;

    fn momentum(&self, name: &str, indices: &[u32]) -> Result<VarRef, ResolveError> {
        Ok(VarRef::momentum(name, indices))
    }

    fn multiplier(&self, name: &str, indices: &[u32]) -> Result<VarRef, ResolveError> {
        Ok(VarRef::multiplier(name, indices))
    }
}

/// Accepts every name as a coordinate.
struct Free;

impl Resolve for Free {
    fn coordinate(&self, name: &str, indices: &[u32], primes: u32) -> Result<VarRef, ResolveError> {
        Ok(VarRef::jet(name, indices, primes))
    }
}

pub fn parse_expression(src: &str) -> Result<Expression, SymError> {
    parse_expression_with(src, &Free)
}

/// Parses with a custom resolver. Positions in errors are 1-based.
pub fn parse_expression_with(src: &str, resolver: &dyn Resolve) -> Result<Expression, SymError> {
    parse_at(src, resolver, 1, 1)
}

pub(crate) fn parse_at(
    src: &str,
    resolver: &dyn Resolve,
    line: usize,
    column: usize,
) -> Result<Expression, SymError> {
    let tokens = lex(src, line, column)?;
    let mut p = Parser { tokens, pos: 0, resolver, end: (line, column + src.chars().count()) };
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(p.error_at(t, format!("unexpected `{}`", t.tok.text())));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Num(r) => r.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Sym(c) => c.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str, line0: usize, col0: usize) -> Result<Vec<Token>, SymError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (line0, col0);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let mut value = Rational::from_integer(chars[start..i].iter().collect::<String>().parse::<BigInt>().unwrap());
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let frac: String = chars[fs..i].iter().collect();
                let scale = num_traits::pow(BigInt::from(10), frac.len());
                value += Rational::new(frac.parse::<BigInt>().unwrap(), scale);
            }
            col += i - start;
            out.push(Token { tok: Tok::Num(value), line: tl, column: tc });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: tl, column: tc });
            continue;
        }
        if "+-*/^()[],'".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: tl, column: tc });
            i += 1;
            col += 1;
            continue;
        }
        return Err(SymError::Parse { line: tl, column: tc, message: format!("unexpected character `{c}`") });
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    resolver: &'a dyn Resolve,
    end: (usize, usize),
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn error_at(&self, t: &Token, message: String) -> SymError {
        SymError::Parse { line: t.line, column: t.column, message }
    }

    fn error_here(&self, message: &str) -> SymError {
        match self.peek() {
            Some(t) => self.error_at(t, message.to_string()),
            None => SymError::Parse { line: self.end.0, column: self.end.1, message: format!("{message} at end of input") },
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), SymError> {
        if self.peek_sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expression, SymError> {
        let mut acc = self.term()?;
        loop {
            if self.peek_sym('+') {
                self.pos += 1;
                acc = acc.add(&self.term()?);
            } else if self.peek_sym('-') {
                self.pos += 1;
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expression, SymError> {
        let mut acc = self.unary()?;
        loop {
            if self.peek_sym('*') {
                self.pos += 1;
                acc = acc.mul(&self.unary()?);
            } else if self.peek_sym('/') {
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc.div(&rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expression, SymError> {
        if self.peek_sym('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, SymError> {
        let base = self.atom()?;
        if self.peek_sym('^') {
            self.pos += 1;
            match self.next() {
                Some(Token { tok: Tok::Num(n), .. }) if n.is_integer() => {
                    let e = n.to_integer().to_u32().ok_or_else(|| self.error_here("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                Some(t) => return Err(self.error_at(&t, "exponent must be a non-negative integer".into())),
                None => return Err(self.error_here("expected exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expression, SymError> {
        let t = match self.next() {
            Some(t) => t,
            None => return Err(self.error_here("expected expression")),
        };
        match &t.tok {
            Tok::Num(n) => Ok(Expression::constant(n.clone())),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(id) if (id == "p" || id == "mult") && self.peek_sym('(') => {
                self.pos += 1;
                let (name, indices, nt) = self.name()?;
                self.expect_sym(')')?;
                let r = if id == "p" {
                    self.resolver.momentum(&name, &indices)
                } else {
                    self.resolver.multiplier(&name, &indices)
                };
                r.map(Expression::var).map_err(|e| resolve_error(e, &name, &nt))
            }
            Tok::Ident(_) => {
                self.pos -= 1;
                let (name, indices, nt) = self.name()?;
                let mut primes = 0;
                while self.peek_sym('\'') {
                    self.pos += 1;
                    primes += 1;
                }
                self.resolver
                    .coordinate(&name, &indices, primes)
                    .map(Expression::var)
                    .map_err(|e| resolve_error(e, &name, &nt))
            }
            _ => Err(self.error_at(&t, format!("unexpected `{}`", t.tok.text()))),
        }
    }

    fn name(&mut self) -> Result<(String, Vec<u32>, Token), SymError> {
        let t = self.next().ok_or_else(|| self.error_here("expected name"))?;
        let name = match &t.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.error_at(&t, "expected name".into())),
        };
        let mut indices = Vec::new();
        if self.peek_sym('[') {
            self.pos += 1;
            loop {
                match self.next() {
                    Some(Token { tok: Tok::Num(n), .. }) if n.is_integer() => {
                        let ix = n.to_integer().to_u32().ok_or_else(|| self.error_here("index too large"))?;
                        indices.push(ix);
                    }
                    Some(bad) => return Err(self.error_at(&bad, "expected index".into())),
                    None => return Err(self.error_here("expected index")),
                }
                if self.peek_sym(',') {
                    self.pos += 1;
                    continue;
                }
                self.expect_sym(']')?;
                break;
            }
        }
        Ok((name, indices, t))
    }
}

fn resolve_error(e: ResolveError, name: &str, at: &Token) -> SymError {
    match e {
        ResolveError::UnknownSymbol => SymError::UnknownSymbol { name: name.to_string(), line: at.line, column: at.column },
        ResolveError::IndexOutOfRange => SymError::IndexOutOfRange { name: name.to_string(), line: at.line, column: at.column },
    }
}
