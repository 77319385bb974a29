//! Gauge generators: Noether identity checks, independence, and constraints
//! built by contracting canonical momenta with the generator's `k = 0` part.

use std::collections::{BTreeMap, BTreeSet};

use crate::constraint::{Constraint, Origin};
use crate::diracflow::sample::{generic_point, rng};
use crate::legendre::LegendreResult;
use crate::linalg::rank;
use crate::modelspec::ModelSpec;
use crate::symexpr::{Expression, Poly, SymError, VarRef};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GaugeError {
    #[error("gauge identity fails for `{generator}`: residue {residue}")]
    IdentityViolated { generator: String, residue: Expression },
    #[error("generator coefficients could not be evaluated at any sample point")]
    SamplingDegenerate,
    #[error("`{generator}` has a k={k} component on {coordinate}, whose momentum does not vanish")]
    ConjectureInapplicable { generator: String, coordinate: VarRef, k: u32 },
    #[error("`{generator}` yields an identically zero constraint")]
    DegenerateGenerator { generator: String },
    #[error(transparent)]
    Symbolic(#[from] SymError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoetherReport {
    /// `E_a = d/dt ∂L/∂v_a − ∂L/∂q_a`.
    pub euler_lagrange: Vec<(VarRef, Expression)>,
    /// One residue per generator, in declaration order.
    pub residues: Vec<(String, Expression)>,
}

impl NoetherReport {
    pub fn all_zero(&self) -> bool {
        self.residues.iter().all(|(_, r)| r.is_zero())
    }
}

pub fn euler_lagrange(m: &ModelSpec) -> Result<Vec<(VarRef, Expression)>, SymError> {
    let cap = m.options.jet_cap.max(2);
    m.coordinate_list()
        .into_iter()
        .map(|q| {
            let dv = m.lagrangian.partial_derivative(&q.velocity());
            let e = dv.total_time_derivative_capped(cap)?.sub(&m.lagrangian.partial_derivative(&q));
            Ok((q, e))
        })
        .collect()
}

/// `Σ_a Σ_k (−d/dt)^k (E_a R^a_k)` for every generator, without judging it.
pub fn noether_residues(m: &ModelSpec) -> Result<NoetherReport, SymError> {
    let el = euler_lagrange(m)?;
    let by_coord: BTreeMap<&VarRef, &Expression> = el.iter().map(|(q, e)| (q, e)).collect();
    let mut residues = Vec::with_capacity(m.generators.len());
    for g in &m.generators {
        // group by k so each power of d/dt is applied once
        let mut by_k: BTreeMap<u32, Expression> = BTreeMap::new();
        for c in &g.components {
            let term = by_coord[&c.coordinate].mul(&c.coefficient);
            let slot = by_k.entry(c.k).or_insert_with(Expression::zero);
            *slot = slot.add(&term);
        }
        let mut total = Expression::zero();
        for (k, mut e) in by_k {
            for _ in 0..k {
                e = e.total_time_derivative_capped(m.options.jet_cap.max(2) + k)?.neg();
            }
            total = total.add(&e);
        }
        residues.push((g.parameter_name.clone(), total));
    }
    Ok(NoetherReport { euler_lagrange: el, residues })
}

/// Errors on the first generator whose residue is not identically zero.
pub fn noether_identity_check(m: &ModelSpec) -> Result<NoetherReport, GaugeError> {
    let report = noether_residues(m)?;
    if let Some((g, r)) = report.residues.iter().find(|(_, r)| !r.is_zero()) {
        return Err(GaugeError::IdentityViolated { generator: g.clone(), residue: r.clone() });
    }
    Ok(report)
}

/// True iff the generators' coefficient columns have full generic rank.
pub fn independence_check(m: &ModelSpec) -> Result<bool, GaugeError> {
    if m.generators.is_empty() {
        return Ok(true);
    }
    let keys: BTreeSet<(VarRef, u32)> =
        m.generators.iter().flat_map(|g| g.components.iter().map(|c| (c.coordinate.clone(), c.k))).collect();
    let vars: BTreeSet<VarRef> =
        m.generators.iter().flat_map(|g| g.components.iter().flat_map(|c| c.coefficient.vars())).collect();
    let mut g = rng(m.options.seed, 0x696e);
    let mut best = None;
    for _ in 0..m.options.sample_count.max(1) {
        let pt = generic_point(&vars, &mut g);
        let rows: Result<Vec<Vec<_>>, SymError> = keys
            .iter()
            .map(|(q, k)| {
                m.generators
                    .iter()
                    .map(|gen| {
                        gen.components
                            .iter()
                            .find(|c| &c.coordinate == q && c.k == *k)
                            .map_or(Ok(num_traits::Zero::zero()), |c| c.coefficient.evaluate(&pt))
                    })
                    .collect()
            })
            .collect();
        if let Ok(rows) = rows {
            let r = rank(rows);
            best = Some(best.map_or(r, |b: usize| b.max(r)));
        }
    }
    best.map(|r| r == m.generators.len()).ok_or(GaugeError::SamplingDegenerate)
}

/// `Φ_α = Σ_a p_a R^a_(0)α` over coordinates with a non-vanishing momentum.
/// Components with `k ≥ 1` must act on coordinates whose momentum vanishes.
pub fn conjecture_constraints(m: &ModelSpec, r: &LegendreResult) -> Result<Vec<Constraint>, GaugeError> {
    let discardable: BTreeSet<&VarRef> = r.discardable.iter().collect();
    let mut out = Vec::with_capacity(m.generators.len());
    for g in &m.generators {
        let mut phi = Expression::zero();
        for c in &g.components {
            let canonical = !discardable.contains(&c.coordinate);
            if c.k >= 1 && canonical {
                return Err(GaugeError::ConjectureInapplicable {
                    generator: g.parameter_name.clone(),
                    coordinate: c.coordinate.clone(),
                    k: c.k,
                });
            }
            if c.k == 0 && canonical {
                phi = phi.add(&Expression::var(c.coordinate.conjugate_momentum()).mul(&c.coefficient));
            }
        }
        let num: &Poly = phi.numerator();
        let c = Constraint::new(num, 0, Origin::Conjecture)
            .ok_or_else(|| GaugeError::DegenerateGenerator { generator: g.parameter_name.clone() })?;
        out.push(c);
    }
    Ok(out)
}
