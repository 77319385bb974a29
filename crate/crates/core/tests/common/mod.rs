//! Oracles shared by the integration suites. Nothing here calls the
//! Legendre, Dirac or generator code under test.

#![allow(dead_code)]

pub mod trees;

use std::collections::HashMap;

use gaugecon::constraint::{normalize, Constraint};
use gaugecon::modelspec::{builtin_model, ModelSpec};
use gaugecon::symexpr::{Expression, Rational, VarRef};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn e(s: &str) -> Expression {
    s.parse().unwrap()
}

pub fn model(name: &str, params: &[(&str, &str)]) -> ModelSpec {
    let p: Vec<(String, String)> = params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    builtin_model(name, &p).unwrap()
}

/// Normalized numerators, rendered and sorted, for set comparison up to scale.
pub fn normalized_set<'a>(exprs: impl IntoIterator<Item = &'a Expression>) -> Vec<String> {
    let mut v: Vec<String> = exprs.into_iter().map(|x| Expression::from_poly(normalize(x.numerator())).to_string()).collect();
    v.sort();
    v
}

pub fn constraint_exprs(cs: &[Constraint]) -> Vec<Expression> {
    cs.iter().map(|c| c.expr.clone()).collect()
}

/// Discrete Gauss law at site `n` on the periodic `N^3` lattice:
/// `Σ_i p(A[i, n - e_i]) - p(A[i, n])`.
pub fn lattice_gauss_law(n: [u32; 3], size: u32) -> Expression {
    let mut g = Expression::zero();
    for i in 0..3 {
        let mut back = n;
        back[i] = (n[i] + size - 1) % size;
        let link = |s: [u32; 3]| Expression::var(VarRef::momentum("A", &[i as u32 + 1, s[0], s[1], s[2]]));
        g = g.add(&link(back)).sub(&link(n));
    }
    g
}

pub fn sites(size: u32) -> Vec<[u32; 3]> {
    let mut v = Vec::new();
    for a in 0..size {
        for b in 0..size {
            for c in 0..size {
                v.push([a, b, c]);
            }
        }
    }
    v
}

pub fn levi_civita(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

/// Plain canonical bracket by finite sums over the given coordinates.
pub fn bracket(f: &Expression, g: &Expression, coords: &[VarRef]) -> Expression {
    let mut out = Expression::zero();
    for q in coords {
        let p = q.conjugate_momentum();
        out = out
            .add(&f.partial_derivative(q).mul(&g.partial_derivative(&p)))
            .sub(&f.partial_derivative(&p).mul(&g.partial_derivative(q)));
    }
    out
}

pub fn phase_point(vars: impl IntoIterator<Item = VarRef>, rng: &mut ChaCha8Rng) -> HashMap<VarRef, f64> {
    vars.into_iter().map(|v| (v, rng.gen_range(-2.0..2.0))).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn exact_point(vars: impl IntoIterator<Item = VarRef>, rng: &mut ChaCha8Rng) -> HashMap<VarRef, Rational> {
    vars.into_iter()
        .map(|v| (v, Rational::new(rng.gen_range(-20i64..20).into(), rng.gen_range(1i64..7).into())))
        .collect()
}

/// Solves a small dense system by Gaussian elimination with partial pivoting.
pub fn solve_f64(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| a[c][k] * x[k]).sum();
        x[c] = (b[c] - s) / a[c][c];
    }
    Some(x)
}

/// Every model with declared generators in the catalog.
pub fn gauge_models() -> Vec<ModelSpec> {
    vec![
        model("toy_gauge", &[]),
        model("maxwell_lattice", &[("N", "2")]),
        model("ym_mechanics", &[]),
        model("ym_mechanics", &[("with_scalar", "false")]),
    ]
}
