//! Random points on a constraint surface, for numeric guards on symbolic
//! weak-equality verdicts and generic-rank checks.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{rank, solve_affine};
use crate::symexpr::poly::rational_to_f64;
use crate::symexpr::{Expression, Poly, Rational, VarRef};

const ATTEMPTS: usize = 32;

pub type Point = HashMap<VarRef, Rational>;

/// Deterministic generator for one numeric check. Each check reseeds, so
/// results do not depend on how many checks ran before.
pub fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn random_rational(rng: &mut impl Rng) -> Rational {
    let n: i64 = rng.gen_range(-97..=97);
    let d: i64 = rng.gen_range(1..=13);
    Rational::new(n.into(), d.into())
}

/// A point assigning every symbol in `universe` plus every symbol of the
/// constraints, with all constraints exactly zero.
///
/// Non-momentum symbols are drawn at random. Coordinate-only constraints
/// are then solved for one coordinate each, and finally the constraints,
/// which must be affine in momenta at that point, are solved for momenta.
/// Free unknowns get random values.
pub fn surface_point(
    constraints: &[Poly],
    universe: &BTreeSet<VarRef>,
    rng: &mut impl Rng,
    tolerance: f64,
) -> Option<Point> {
    let mut all = universe.clone();
    for c in constraints {
        all.extend(c.vars());
    }
    let momenta: Vec<VarRef> = all.iter().filter(|v| v.is_momentum()).cloned().collect();
    let q_only: Vec<&Poly> = constraints.iter().filter(|c| !c.mentions(VarRef::is_momentum)).collect();
    let mut solve_for: Vec<VarRef> = Vec::new();
    for c in &q_only {
        let v = c.vars().into_iter().find(|v| c.degree_in(v) == 1 && !solve_for.contains(v))?;
        solve_for.push(v);
    }
    for _ in 0..ATTEMPTS {
        let mut point: Point = all
            .iter()
            .filter(|v| !v.is_momentum() && !solve_for.contains(v))
            .map(|v| (v.clone(), random_rational(rng)))
            .collect();
        if !solve_for.is_empty() {
            let sol = solve_linear(&q_only, &solve_for, &point, rng);
            let Some(sol) = sol else { continue };
            point.extend(solve_for.iter().cloned().zip(sol));
        }
        let moment: Vec<&Poly> = constraints.iter().filter(|c| c.mentions(VarRef::is_momentum)).collect();
        let Some(sol) = solve_linear(&moment, &momenta, &point, rng) else { continue };
        point.extend(momenta.iter().cloned().zip(sol));
        let ok = constraints.iter().all(|c| match c.eval(&point) {
            Ok(v) => rational_to_f64(&v).abs() <= tolerance,
            Err(_) => false,
        });
        if ok {
            return Some(point);
        }
    }
    None
}

/// Solves the equations, after partial evaluation at `point`, as an affine
/// system in `unknowns`. `None` if some equation is not affine there or the
/// system is inconsistent.
fn solve_linear(eqs: &[&Poly], unknowns: &[VarRef], point: &Point, rng: &mut impl Rng) -> Option<Vec<Rational>> {
    if eqs.is_empty() {
        return Some(unknowns.iter().map(|_| random_rational(rng)).collect());
    }
    let mut a = Vec::with_capacity(eqs.len());
    let mut b = Vec::with_capacity(eqs.len());
    for e in eqs {
        let r = e.partial_eval(point);
        if r.total_degree() > 1 || r.mentions(|v| !unknowns.contains(v)) {
            return None;
        }
        a.push(unknowns.iter().map(|u| r.derivative(u).constant_term()).collect::<Vec<_>>());
        b.push(-r.constant_term());
    }
    let free: Vec<Rational> = unknowns.iter().map(|_| random_rational(rng)).collect();
    solve_affine(&a, &b, |i| free[i].clone())
}

/// A point assigning random values to every symbol in `vars`.
pub fn generic_point(vars: &BTreeSet<VarRef>, rng: &mut impl Rng) -> Point {
    vars.iter().map(|v| (v.clone(), random_rational(rng))).collect()
}

/// Rank of `∂f_i/∂v_j` at `point`.
pub fn jacobian_rank_at(polys: &[Poly], vars: &[VarRef], point: &Point) -> usize {
    let rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| {
            vars.iter()
                .map(|v| p.derivative(v).eval(point).unwrap_or_else(|_| Rational::zero()))
                .collect()
        })
        .collect();
    rank(rows)
}

/// Largest Jacobian rank over `trials` random points in all symbols
/// mentioned by `polys`.
pub fn generic_jacobian_rank(polys: &[Poly], seed: u64, trials: usize) -> usize {
    let vars: BTreeSet<VarRef> = polys.iter().flat_map(Poly::vars).collect();
    let list: Vec<VarRef> = vars.iter().cloned().collect();
    let mut g = rng(seed, 0x6a63);
    (0..trials.max(1))
        .map(|_| jacobian_rank_at(polys, &list, &generic_point(&vars, &mut g)))
        .max()
        .unwrap_or(0)
}

/// Outcome of sampling an expression on a surface.
#[derive(Debug, Clone)]
pub struct NumericCheck {
    pub zero: bool,
    pub max_abs: f64,
    /// The sample with the largest `|e|`.
    pub witness: Option<Point>,
}

/// Evaluates `e` at `count` surface points. Points where `e` has a vanishing
/// denominator are redrawn. `None` when the surface could not be sampled.
pub fn numeric_weak_zero(
    e: &Expression,
    constraints: &[Poly],
    count: usize,
    tolerance: f64,
    seed: u64,
) -> Option<NumericCheck> {
    let universe = e.vars();
    let mut g = rng(seed, 0x7765);
    let mut worst: Option<(f64, Point)> = None;
    let mut taken = 0;
    let mut tries = 0;
    while taken < count.max(1) {
        tries += 1;
        if tries > count.max(1) * 4 + ATTEMPTS {
            return None;
        }
        let p = surface_point(constraints, &universe, &mut g, tolerance)?;
        let Ok(v) = e.evaluate(&p) else { continue };
        taken += 1;
        let a = rational_to_f64(&v.abs());
        if worst.as_ref().is_none_or(|(w, _)| a > *w) {
            worst = Some((a, p));
        }
    }
    let (max_abs, witness) = worst.expect("at least one sample");
    Some(NumericCheck { zero: max_abs <= tolerance, max_abs, witness: Some(witness) })
}

/// `name = value` pairs in symbol order, for diagnostics.
pub fn render_point(p: &Point) -> Vec<(String, String)> {
    let mut v: Vec<(&VarRef, &Rational)> = p.iter().collect();
    v.sort_by(|a, b| a.0.cmp(b.0));
    v.into_iter().map(|(k, x)| (k.to_string(), x.to_string())).collect()
}
