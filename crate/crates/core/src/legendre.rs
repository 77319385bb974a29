//! Momenta, velocity elimination, primary constraints and the canonical
//! Hamiltonian for Lagrangians at most quadratic in velocities.

use std::collections::BTreeSet;

use crate::constraint::{Constraint, Origin};
use crate::diracflow::sample::{generic_point, rng};
use crate::diracflow::weak::WeakReducer;
use crate::linalg::{bareiss, rank};
use crate::modelspec::ModelSpec;
use crate::symexpr::{Expression, Poly, Rational, VarRef};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LegendreError {
    #[error("lagrangian term `{term}` is of degree {degree} in velocities; at most 2 is supported")]
    NonQuadraticVelocity { term: String, degree: u32 },
    #[error("hessian rank {symbolic} from elimination disagrees with rank {numeric} at a sample point")]
    RankNotConstant { symbolic: usize, numeric: usize },
    #[error("hamiltonian depends on unsolved velocity {velocity} off the primary surface: {coefficient}")]
    VelocityDependentHamiltonian { velocity: VarRef, coefficient: Expression },
}

#[derive(Debug, Clone)]
pub struct LegendreResult {
    pub coordinates: Vec<VarRef>,
    /// `p_a = ∂L/∂v_a`, one per coordinate.
    pub momenta_defs: Vec<(VarRef, Expression)>,
    pub hessian: Vec<Vec<Expression>>,
    pub rank: usize,
    /// Solved velocities in terms of coordinates, momenta and unsolved velocities.
    pub solvable_velocities: Vec<(VarRef, Expression)>,
    pub unsolved_velocities: Vec<VarRef>,
    pub primary_constraints: Vec<Constraint>,
    pub discardable: Vec<VarRef>,
    pub canonical_hamiltonian: Expression,
}

pub fn compute_momenta(m: &ModelSpec) -> Vec<(VarRef, Expression)> {
    m.coordinate_list()
        .into_iter()
        .map(|q| {
            let p = m.lagrangian.partial_derivative(&q.velocity());
            (q, p)
        })
        .collect()
}

fn check_quadratic(l: &Expression) -> Result<(), LegendreError> {
    for (mono, c) in l.numerator().terms() {
        let degree: u32 = mono.factors().iter().filter(|(v, _)| v.jet_order() == 1).map(|(_, e)| e).sum();
        if degree > 2 {
            let term = Expression::from_poly(Poly::term(mono.clone(), c.clone()));
            return Err(LegendreError::NonQuadraticVelocity { term: term.to_string(), degree });
        }
    }
    Ok(())
}

pub fn primary_constraints(m: &ModelSpec) -> Result<LegendreResult, LegendreError> {
    let l = &m.lagrangian;
    check_quadratic(l)?;
    let coords = m.coordinate_list();
    let vels: Vec<VarRef> = coords.iter().map(VarRef::velocity).collect();
    let n = coords.len();
    let num = l.numerator();
    let den = l.denominator();

    let momenta_defs = compute_momenta(m);
    let hessian: Vec<Vec<Expression>> = momenta_defs
        .iter()
        .map(|(_, p)| vels.iter().map(|v| p.partial_derivative(v)).collect())
        .collect();

    // d·p_a = W'_ab v_b + b'_a with W', b' free of velocities
    let zero_v: std::collections::HashMap<VarRef, Poly> = vels.iter().map(|v| (v.clone(), Poly::zero())).collect();
    let mut rows = Vec::with_capacity(n);
    for (q, v) in coords.iter().zip(&vels) {
        let dn = num.derivative(v);
        let mut row: Vec<Poly> = vels.iter().map(|w| dn.derivative(w)).collect();
        let b = dn.substitute(&zero_v);
        row.push(den.mul(&Poly::var(q.conjugate_momentum())).sub(&b));
        rows.push(row);
    }
    let w_prime: Vec<Vec<Poly>> = rows.iter().map(|r| r[..n].to_vec()).collect();
    let ech = bareiss(rows, n);
    let r = ech.rank();

    let vars: BTreeSet<VarRef> = w_prime.iter().flatten().flat_map(Poly::vars).collect();
    let mut g = rng(m.options.seed, 0x6c65);
    for _ in 0..m.options.sample_count.max(1) {
        let pt = generic_point(&vars, &mut g);
        let numeric = rank(w_prime.iter().map(|row| row.iter().map(|e| e.eval(&pt).unwrap()).collect::<Vec<Rational>>()).collect());
        if numeric != r {
            return Err(LegendreError::RankNotConstant { symbolic: r, numeric });
        }
    }

    let pivot_rows: BTreeSet<usize> = ech.pivots.iter().map(|&(row, _)| row).collect();
    let primary: Vec<Constraint> = (0..n)
        .filter(|i| !pivot_rows.contains(i))
        .filter_map(|i| Constraint::new(&ech.rows[i][n], 0, Origin::Dirac))
        .collect();

    let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
    let unsolved: Vec<VarRef> = (0..n).filter(|c| !pivot_cols.contains(c)).map(|c| vels[c].clone()).collect();
    let mut solved: Vec<Option<Expression>> = vec![None; n];
    for &(row, col) in ech.pivots.iter().rev() {
        let mut rhs = Expression::from_poly(ech.rows[row][n].clone());
        for j in col + 1..n {
            let a = &ech.rows[row][j];
            if a.is_zero() {
                continue;
            }
            let vj = solved[j].clone().unwrap_or_else(|| Expression::var(vels[j].clone()));
            rhs = rhs.sub(&Expression::from_poly(a.clone()).mul(&vj));
        }
        let pivot = Expression::from_poly(ech.rows[row][col].clone());
        solved[col] = Some(rhs.div(&pivot).expect("pivot is a nonzero coordinate polynomial"));
    }
    let solvable_velocities: Vec<(VarRef, Expression)> =
        solved.iter().enumerate().filter_map(|(c, s)| s.clone().map(|e| (vels[c].clone(), e))).collect();

    let mut h = l.neg();
    for q in &coords {
        h = h.add(&Expression::var(q.conjugate_momentum()).mul(&Expression::var(q.velocity())));
    }
    let h = h.substitute(&solvable_velocities).expect("denominators stay in coordinates");
    let reducer = WeakReducer::new(primary.iter().map(Constraint::poly));
    for v in &unsolved {
        let coefficient = h.partial_derivative(v);
        if !reducer.is_weak_zero(coefficient.numerator()) {
            return Err(LegendreError::VelocityDependentHamiltonian { velocity: v.clone(), coefficient });
        }
    }
    let zeros: Vec<(VarRef, Expression)> = unsolved.iter().map(|v| (v.clone(), Expression::zero())).collect();
    let canonical_hamiltonian = h.substitute(&zeros).expect("zero substitution");

    let mut result = LegendreResult {
        coordinates: coords,
        momenta_defs,
        hessian,
        rank: r,
        solvable_velocities,
        unsolved_velocities: unsolved,
        primary_constraints: primary,
        discardable: Vec::new(),
        canonical_hamiltonian,
    };
    result.discardable = detect_noncanonical(&result);
    Ok(result)
}

/// Coordinates whose momentum vanishes identically.
pub fn detect_noncanonical(r: &LegendreResult) -> Vec<VarRef> {
    r.momenta_defs.iter().filter(|(_, p)| p.is_zero()).map(|(q, _)| q.clone()).collect()
}
