//! Random expression trees with an f64 evaluator that does not go through
//! the kernel.

#![allow(dead_code)]

use gaugecon::diracflow::poisson_bracket;
use gaugecon::symexpr::{Expression, VarRef};
use proptest::prelude::*;

#[derive(Debug, Clone)]
pub enum Tree {
    Var(usize),
    Int(i64),
    Add(Box<Tree>, Box<Tree>),
    Sub(Box<Tree>, Box<Tree>),
    Mul(Box<Tree>, Box<Tree>),
}

pub fn phase_vars() -> Vec<VarRef> {
    vec![
        VarRef::coordinate("x", &[]),
        VarRef::coordinate("y", &[]),
        VarRef::momentum("x", &[]),
        VarRef::momentum("y", &[]),
    ]
}

pub fn coords() -> Vec<VarRef> {
    phase_vars()[..2].to_vec()
}

pub fn tree(vars: usize) -> impl Strategy<Value = Tree> {
    let leaf = prop_oneof![(0..vars).prop_map(Tree::Var), (-3i64..=3).prop_map(Tree::Int)];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Tree::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

pub fn to_expr(t: &Tree, vars: &[VarRef]) -> Expression {
    match t {
        Tree::Var(i) => Expression::var(vars[*i].clone()),
        Tree::Int(n) => Expression::int(*n),
        Tree::Add(a, b) => to_expr(a, vars).add(&to_expr(b, vars)),
        Tree::Sub(a, b) => to_expr(a, vars).sub(&to_expr(b, vars)),
        Tree::Mul(a, b) => to_expr(a, vars).mul(&to_expr(b, vars)),
    }
}

pub fn eval(t: &Tree, x: &[f64]) -> f64 {
    match t {
        Tree::Var(i) => x[*i],
        Tree::Int(n) => *n as f64,
        Tree::Add(a, b) => eval(a, x) + eval(b, x),
        Tree::Sub(a, b) => eval(a, x) - eval(b, x),
        Tree::Mul(a, b) => eval(a, x) * eval(b, x),
    }
}

/// Same value, different shape: operands swapped and products distributed.
pub fn rewrite(t: &Tree) -> Tree {
    match t {
        Tree::Add(a, b) => Tree::Add(Box::new(rewrite(b)), Box::new(rewrite(a))),
        Tree::Sub(a, b) => Tree::Add(Box::new(Tree::Mul(Box::new(Tree::Int(-1)), Box::new(rewrite(b)))), Box::new(rewrite(a))),
        Tree::Mul(a, b) => match (&**a, &**b) {
            (Tree::Add(c, d), e) | (e, Tree::Add(c, d)) => Tree::Add(
                Box::new(Tree::Mul(Box::new(rewrite(e)), Box::new(rewrite(c)))),
                Box::new(Tree::Mul(Box::new(rewrite(d)), Box::new(rewrite(e)))),
            ),
            _ => Tree::Mul(Box::new(rewrite(b)), Box::new(rewrite(a))),
        },
        leaf => leaf.clone(),
    }
}

/// Phase-space function, optionally divided by a coordinate polynomial.
pub fn phase_expr() -> impl Strategy<Value = Expression> {
    (tree(4), prop::option::weighted(0.3, tree(2))).prop_filter_map("zero denominator", |(n, d)| {
        let num = to_expr(&n, &phase_vars());
        match d {
            None => Some(num),
            Some(d) => {
                let den = to_expr(&d, &coords()).add(&Expression::int(7));
                num.div(&den).ok()
            }
        }
    })
}

pub fn pb(f: &Expression, g: &Expression) -> Expression {
    poisson_bracket(f, g, &coords())
}
