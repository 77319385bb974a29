//! Poisson brackets, the total Hamiltonian, Dirac's consistency algorithm,
//! first/second-class classification, and weak equality.

mod bracket;
pub mod sample;
pub mod weak;

use std::collections::BTreeSet;

pub use bracket::{phase_coordinates, poisson_bracket, poly_bracket};
pub use weak::WeakReducer;

pub use crate::constraint::{ClassLabel, Constraint, Origin};
use crate::legendre::LegendreResult;
use crate::linalg::bareiss;
use crate::modelspec::ModelOptions;
use crate::symexpr::{Expression, Poly, VarRef};
use sample::{generic_jacobian_rank, numeric_weak_zero, render_point};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiracError {
    #[error("inconsistent lagrangian: consistency requires {witness} = 0")]
    InconsistentLagrangian { witness: Expression, partial: Box<DiracResult> },
    #[error("no fixpoint within {limit} generations")]
    GenerationLimitExceeded { limit: u32, partial: Box<DiracResult> },
    #[error("{count} second-class constraints; an even count is required")]
    OddSecondClassCount { count: usize },
    #[error("could not sample points on the constraint surface")]
    SurfaceSamplingFailed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiracResult {
    pub constraints: Vec<Constraint>,
    /// Equations that fix a multiplier, each with the first multiplier it
    /// determines.
    pub multiplier_equations: Vec<(VarRef, Expression)>,
    pub generations_run: u32,
    pub consistent: bool,
    pub witness: Option<Expression>,
    pub total_hamiltonian: Expression,
    pub multipliers: Vec<VarRef>,
    /// Cases where the symbolic engine found a nonzero remainder that
    /// vanished at every surface sample.
    pub indeterminate: Vec<Expression>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Identity,
    NewConstraint(Expression),
    MultiplierFixed { multiplier: VarRef, equation: Expression },
    Contradiction(Expression),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakVerdict {
    Zero,
    NonZero,
    /// Symbolic reduction left a remainder but every sample vanished.
    Indeterminate,
}

pub fn multiplier(m: usize) -> VarRef {
    VarRef::multiplier("lambda", &[m as u32])
}

/// `H_T = H_c + Σ_m λ_m φ_m` with `λ_m = lambda[m]`.
pub fn total_hamiltonian(r: &LegendreResult) -> Expression {
    let mut h = r.canonical_hamiltonian.clone();
    for (m, c) in r.primary_constraints.iter().enumerate() {
        h = h.add(&Expression::var(multiplier(m)).mul(&c.expr));
    }
    h
}

/// Reduces `e` modulo `constraints`. Only the numerator matters for weak
/// vanishing since denominators are nonvanishing coordinate polynomials.
pub fn weak_reduce(e: &Expression, constraints: &[Constraint]) -> Expression {
    let w = WeakReducer::new(constraints.iter().map(Constraint::poly));
    Expression::from_poly(w.reduce(e.numerator()))
}

/// Numeric weak-zero check with the worst sample as a witness.
pub fn weak_zero_numeric(
    e: &Expression,
    constraints: &[Constraint],
    options: &ModelOptions,
) -> Result<(bool, Vec<(String, String)>), DiracError> {
    let polys: Vec<Poly> = constraints.iter().map(|c| c.poly().clone()).collect();
    let r = numeric_weak_zero(e, &polys, options.sample_count, options.numeric_tolerance, options.seed)
        .ok_or(DiracError::SurfaceSamplingFailed)?;
    Ok((r.zero, r.witness.as_ref().map(render_point).unwrap_or_default()))
}

/// Symbolic weak-zero test guarded by sampling when the symbolic remainder
/// is not a constant.
pub fn weak_verdict(reducer: &WeakReducer, e: &Poly, surface: &[Poly], options: &ModelOptions) -> WeakVerdict {
    let r = reducer.reduce(e);
    if r.is_zero() {
        return WeakVerdict::Zero;
    }
    if r.is_constant() {
        return WeakVerdict::NonZero;
    }
    let ex = Expression::from_poly(e.clone());
    match numeric_weak_zero(&ex, surface, options.sample_count, options.numeric_tolerance, options.seed) {
        Some(n) if n.zero => WeakVerdict::Indeterminate,
        _ => WeakVerdict::NonZero,
    }
}

pub fn consistency_step(c: &Constraint, h_t: &Expression, known: &[Constraint]) -> StepOutcome {
    let reducer = WeakReducer::new(known.iter().map(Constraint::poly));
    let coords = phase_coordinates(known.iter().map(|k| &k.expr).chain([&c.expr, h_t]));
    step(c, h_t, &coords, &reducer)
}

fn step(c: &Constraint, h_t: &Expression, coords: &[VarRef], reducer: &WeakReducer) -> StepOutcome {
    let b = poisson_bracket(&c.expr, h_t, coords);
    let r = reducer.reduce(b.numerator());
    if r.is_zero() {
        return StepOutcome::Identity;
    }
    let mults: Vec<VarRef> = r.vars().into_iter().filter(VarRef::is_multiplier).collect();
    for m in &mults {
        if !reducer.is_weak_zero(&r.derivative(m)) {
            return StepOutcome::MultiplierFixed { multiplier: m.clone(), equation: Expression::from_poly(r) };
        }
    }
    let free = if mults.is_empty() {
        r
    } else {
        let zero = mults.iter().map(|m| (m.clone(), Poly::zero())).collect();
        reducer.reduce(&r.substitute(&zero))
    };
    classify_residue(free)
}

fn classify_residue(r: Poly) -> StepOutcome {
    if r.is_zero() {
        StepOutcome::Identity
    } else if r.is_constant() {
        StepOutcome::Contradiction(Expression::from_poly(r))
    } else {
        StepOutcome::NewConstraint(Expression::from_poly(r))
    }
}

/// Multiplier-free consequences of a set of multiplier equations, found by
/// fraction-free elimination of the multipliers.
fn multiplier_free_combinations(eqs: &[Poly], mults: &[VarRef], reducer: &WeakReducer) -> Vec<Poly> {
    if eqs.len() < 2 {
        return Vec::new();
    }
    let zero = mults.iter().map(|m| (m.clone(), Poly::zero())).collect();
    let rows: Vec<Vec<Poly>> = eqs
        .iter()
        .map(|e| {
            let mut row: Vec<Poly> = mults.iter().map(|m| reducer.reduce(&e.derivative(m))).collect();
            row.push(reducer.reduce(&e.substitute(&zero)));
            row
        })
        .collect();
    let ech = bareiss(rows, mults.len());
    let pivot_rows: BTreeSet<usize> = ech.pivots.iter().map(|&(r, _)| r).collect();
    (0..eqs.len())
        .filter(|i| !pivot_rows.contains(i))
        .map(|i| reducer.reduce(&ech.rows[i][mults.len()]))
        .filter(|p| !p.is_zero())
        .collect()
}

/// Dirac's algorithm: each generation brackets every known constraint with
/// `H_T` and adds the independent residues, until nothing new appears.
pub fn run_dirac(r: &LegendreResult, options: &ModelOptions) -> Result<DiracResult, DiracError> {
    let h_t = total_hamiltonian(r);
    let multipliers: Vec<VarRef> = (0..r.primary_constraints.len()).map(multiplier).collect();
    let coords = r.coordinates.clone();
    let mut result = DiracResult {
        constraints: r.primary_constraints.clone(),
        multiplier_equations: Vec::new(),
        generations_run: 0,
        consistent: true,
        witness: None,
        total_hamiltonian: h_t.clone(),
        multipliers: multipliers.clone(),
        indeterminate: Vec::new(),
    };
    for generation in 1..=options.max_generations {
        result.generations_run = generation;
        let current: Vec<Poly> = result.constraints.iter().map(|c| c.poly().clone()).collect();
        let reducer = WeakReducer::new(&current);
        let mut candidates = Vec::new();
        let mut mult_eqs = Vec::new();
        for c in &result.constraints {
            match step(c, &h_t, &coords, &reducer) {
                StepOutcome::Identity => {}
                StepOutcome::NewConstraint(e) => candidates.push(e.numerator().clone()),
                StepOutcome::MultiplierFixed { multiplier, equation } => mult_eqs.push((multiplier, equation)),
                StepOutcome::Contradiction(w) => return Err(inconsistent(result, w)),
            }
        }
        let eq_polys: Vec<Poly> = mult_eqs.iter().map(|(_, e)| e.numerator().clone()).collect();
        for p in multiplier_free_combinations(&eq_polys, &multipliers, &reducer) {
            match classify_residue(p) {
                StepOutcome::Contradiction(w) => return Err(inconsistent(result, w)),
                StepOutcome::NewConstraint(e) => candidates.push(e.numerator().clone()),
                _ => {}
            }
        }
        result.multiplier_equations = mult_eqs;

        let base_rank = generic_jacobian_rank(&current, options.seed, 3);
        let mut added: Vec<Poly> = Vec::new();
        for cand in candidates {
            let Some(c) = Constraint::new(&cand, generation, Origin::Dirac) else { continue };
            if added.contains(c.poly()) {
                continue;
            }
            let mut with = current.clone();
            with.push(c.poly().clone());
            if generic_jacobian_rank(&with, options.seed, 3) <= base_rank {
                continue;
            }
            let ex = c.expr.clone();
            if let Some(n) = numeric_weak_zero(&ex, &current, options.sample_count, options.numeric_tolerance, options.seed) {
                if n.zero {
                    result.indeterminate.push(ex);
                    continue;
                }
            }
            added.push(c.poly().clone());
            result.constraints.push(c);
        }
        if added.is_empty() {
            return Ok(result);
        }
    }
    let limit = options.max_generations;
    Err(DiracError::GenerationLimitExceeded { limit, partial: Box::new(result) })
}

fn inconsistent(mut partial: DiracResult, witness: Expression) -> DiracError {
    partial.consistent = false;
    partial.witness = Some(witness.clone());
    DiracError::InconsistentLagrangian { witness, partial: Box::new(partial) }
}

/// Labels every constraint first class iff its bracket with every constraint
/// vanishes weakly. Brackets that the symbolic engine cannot settle leave
/// both constraints unclassified.
pub fn classify(mut d: DiracResult, coordinates: &[VarRef], options: &ModelOptions) -> Result<DiracResult, DiracError> {
    let polys: Vec<Poly> = d.constraints.iter().map(|c| c.poly().clone()).collect();
    let reducer = WeakReducer::new(&polys);
    let n = polys.len();
    let mut verdict = vec![vec![WeakVerdict::Zero; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let b = poly_bracket(&polys[i], &polys[j], coordinates);
            let v = weak_verdict(&reducer, &b, &polys, options);
            if v == WeakVerdict::Indeterminate {
                d.indeterminate.push(Expression::from_poly(b));
            }
            verdict[i][j] = v;
            verdict[j][i] = v;
        }
    }
    for (i, c) in d.constraints.iter_mut().enumerate() {
        let row = &verdict[i];
        c.class_label = if row.contains(&WeakVerdict::NonZero) {
            ClassLabel::Second
        } else if row.contains(&WeakVerdict::Indeterminate) {
            ClassLabel::Unclassified
        } else {
            ClassLabel::First
        };
    }
    let count = d.constraints.iter().filter(|c| c.class_label == ClassLabel::Second).count();
    if count % 2 == 1 {
        return Err(DiracError::OddSecondClassCount { count });
    }
    Ok(d)
}


#[cfg(test)]
mod field_models {
    use super::*;
    use crate::legendre::primary_constraints;
    use crate::modelspec::builtin_model;

    fn run(name: &str, params: &[(&str, &str)]) -> DiracResult {
        let p: Vec<(String, String)> = params.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let m = builtin_model(name, &p).unwrap();
        let r = primary_constraints(&m).unwrap();
        let d = run_dirac(&r, &m.options).unwrap();
        classify(d, &r.coordinates, &m.options).unwrap()
    }

    #[test]
    fn maxwell_gauss_laws() {
        let d = run("maxwell_lattice", &[("N", "2")]);
        assert_eq!(d.constraints.iter().filter(|c| c.generation == 0).count(), 8);
        assert_eq!(d.constraints.iter().filter(|c| c.generation == 1).count(), 8);
        assert!(d.constraints.iter().all(|c| c.class_label == ClassLabel::First));
    }

    #[test]
    fn yang_mills_secondaries() {
        let d = run("ym_mechanics", &[]);
        let sec: Vec<&Constraint> = d.constraints.iter().filter(|c| c.generation == 1).collect();
        assert_eq!(sec.len(), 3);
        assert_eq!(d.generations_run, 2);
        assert!(d.constraints.iter().all(|c| c.class_label == ClassLabel::First));
        assert!(d.indeterminate.is_empty());
    }
}
