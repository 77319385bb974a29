mod common;

use std::collections::BTreeSet;

use common::*;
use gaugecon::compare::{build_report, span_equivalent, Verdict};
use gaugecon::constraint::{ClassLabel, Constraint, Origin};
use gaugecon::diracflow::{classify, run_dirac, total_hamiltonian, weak_reduce, weak_zero_numeric, DiracError};
use gaugecon::gaugegen::{conjecture_constraints, noether_identity_check, GaugeError};
use gaugecon::legendre::primary_constraints;
use gaugecon::modelspec::{parse_model, render_model, ModelOptions};
use gaugecon::symexpr::{Expression, VarRef};

#[test]
fn toy_matches_hand_derivation() {
    let m = model("toy_gauge", &[]);
    let r = primary_constraints(&m).unwrap();
    // p_x = v_x - y, p_y = 0, H_c = p_x^2/2 + p_x y
    assert_eq!(r.momenta_defs[0].1, e("x' - y"));
    assert_eq!(r.canonical_hamiltonian, e("p(x)^2/2 + p(x)*y"));
    assert_eq!(total_hamiltonian(&r), e("p(x)^2/2 + p(x)*y + mult(lambda[0])*p(y)"));
    let d = classify(run_dirac(&r, &m.options).unwrap(), &r.coordinates, &m.options).unwrap();
    let got: Vec<(String, u32, ClassLabel)> =
        d.constraints.iter().map(|c| (c.expr.to_string(), c.generation, c.class_label)).collect();
    assert_eq!(got, vec![("p(y)".into(), 0, ClassLabel::First), ("p(x)".into(), 1, ClassLabel::First)]);
}

#[test]
fn solved_velocities_reproduce_momenta() {
    for m in [model("toy_gauge", &[]), model("ym_mechanics", &[]), parse_model(include_str!("../models/rotor.model")).unwrap()] {
        let r = primary_constraints(&m).unwrap();
        assert_eq!(r.primary_constraints.len(), m.dimension() - r.rank, "{}", m.name);
        assert!(r.canonical_hamiltonian.vars().iter().all(|v| v.is_coordinate() || v.is_momentum()));
        for (q, p) in &r.momenta_defs {
            let v = q.velocity();
            if let Some((_, sol)) = r.solvable_velocities.iter().find(|(w, _)| *w == v) {
                let back = p.substitute(&r.solvable_velocities).unwrap();
                let residual = back.sub(&Expression::var(q.conjugate_momentum()));
                assert!(weak_reduce(&residual, &r.primary_constraints).is_zero(), "{q}: {sol}");
            }
        }
    }
}

#[test]
fn maxwell_secondaries_are_lattice_gauss_laws() {
    let m = model("maxwell_lattice", &[("N", "2")]);
    let r = primary_constraints(&m).unwrap();
    let d = classify(run_dirac(&r, &m.options).unwrap(), &r.coordinates, &m.options).unwrap();
    let secondaries: Vec<Expression> = d.constraints.iter().filter(|c| c.generation == 1).map(|c| c.expr.clone()).collect();
    let oracle: Vec<Expression> = sites(2).into_iter().map(|n| lattice_gauss_law(n, 2)).collect();
    assert_eq!(normalized_set(&secondaries), normalized_set(&oracle));
    let primaries: BTreeSet<String> = d.constraints.iter().filter(|c| c.generation == 0).map(|c| c.expr.to_string()).collect();
    let expected: BTreeSet<String> = sites(2).into_iter().map(|n| format!("p(A0[{},{},{}])", n[0], n[1], n[2])).collect();
    assert_eq!(primaries, expected);

    let conj = conjecture_constraints(&m, &r).unwrap();
    assert_eq!(normalized_set(&constraint_exprs(&conj)), normalized_set(&oracle));
}

/// `δL = Σ ∂L/∂q δq + ∂L/∂v d/dt δq` with one symbolic gauge parameter per
/// site vanishes identically for the lattice field.
#[test]
fn maxwell_lagrangian_is_gauge_invariant_to_first_order() {
    for size in [1, 2] {
        let n = size.to_string();
        let m = model("maxwell_lattice", &[("N", &n)]);
        let mut delta_q: Vec<(VarRef, Expression)> = m.coordinate_list().into_iter().map(|q| (q, Expression::zero())).collect();
        for g in &m.generators {
            let idx: Vec<u32> = g.parameter_name[4..g.parameter_name.len() - 1].split(',').map(|s| s.parse().unwrap()).collect();
            for c in &g.components {
                let param = Expression::var(VarRef::jet("eps", &idx, c.k));
                let slot = delta_q.iter_mut().find(|(q, _)| *q == c.coordinate).unwrap();
                slot.1 = slot.1.add(&c.coefficient.mul(&param));
            }
        }
        let l = &m.lagrangian;
        let mut dl = Expression::zero();
        for (q, dq) in &delta_q {
            dl = dl.add(&l.partial_derivative(q).mul(dq));
            dl = dl.add(&l.partial_derivative(&q.velocity()).mul(&dq.total_time_derivative().unwrap()));
        }
        assert!(dl.is_zero(), "N={size}: {dl}");
    }
}

/// `{G_a, G_b} = Σ_c k_c G_c`: fit `k` numerically at random phase-space
/// points, check the fit at 50 more points, then confirm exactly.
#[test]
fn yang_mills_gauss_laws_close_under_brackets() {
    let m = model("ym_mechanics", &[]);
    let r = primary_constraints(&m).unwrap();
    let d = classify(run_dirac(&r, &m.options).unwrap(), &r.coordinates, &m.options).unwrap();
    let g: Vec<Expression> = d.constraints.iter().filter(|c| c.generation == 1).map(|c| c.expr.clone()).collect();
    assert_eq!(g.len(), 3);
    let coords = r.coordinates.clone();
    let vars: BTreeSet<VarRef> = coords.iter().flat_map(|q| [q.clone(), q.conjugate_momentum()]).collect();
    let mut rng = rng(11);
    for a in 0..3 {
        for b in a + 1..3 {
            let br = bracket(&g[a], &g[b], &coords);
            let pts: Vec<_> = (0..53).map(|_| phase_point(vars.iter().cloned(), &mut rng)).collect();
            let rows: Vec<Vec<f64>> = pts[..3].iter().map(|p| g.iter().map(|gc| gc.evaluate_f64(p).unwrap()).collect()).collect();
            let rhs: Vec<f64> = pts[..3].iter().map(|p| br.evaluate_f64(p).unwrap()).collect();
            let k = solve_f64(rows, rhs).unwrap();
            for p in &pts[3..] {
                let fit: f64 = g.iter().zip(&k).map(|(gc, kc)| gc.evaluate_f64(p).unwrap() * kc).sum();
                assert!((fit - br.evaluate_f64(p).unwrap()).abs() < 1e-9, "({a},{b})");
            }
            // only the third colour contributes, with unit weight
            let c = 3 - a - b;
            for (i, kc) in k.iter().enumerate() {
                let expected = if i == c { 1.0 } else { 0.0 };
                assert!((kc.abs() - expected).abs() < 1e-9, "k = {k:?}");
            }
            let combo = g[c].scale(&gaugecon::symexpr::rat(k[c].round() as i64));
            assert!(br.sub(&combo).is_zero());
            assert!(weak_reduce(&br, &d.constraints).is_zero());
        }
    }
}

#[test]
fn control_models() {
    let osc = build_report(&model("oscillator", &[]));
    assert_eq!(osc.verdict, Some(Verdict::NoGaugeSector));
    assert!(osc.dirac.unwrap().constraints.is_empty());

    let m = model("second_class_toy", &[]);
    let r = primary_constraints(&m).unwrap();
    let d = classify(run_dirac(&r, &m.options).unwrap(), &r.coordinates, &m.options).unwrap();
    assert_eq!(normalized_set(&constraint_exprs(&d.constraints)), normalized_set(&[e("p(x) - y"), e("p(y)")]));
    assert!(d.constraints.iter().all(|c| c.class_label == ClassLabel::Second));
    assert_eq!(bracket(&e("p(x) - y"), &e("p(y)"), &r.coordinates), Expression::int(-1));
    let rep = build_report(&m);
    assert_eq!(rep.verdict, Some(Verdict::NoGaugeSector));
    assert!(rep.conjecture.is_empty());

    let m = parse_model(include_str!("../models/inconsistent.model")).unwrap();
    let r = primary_constraints(&m).unwrap();
    assert!(matches!(run_dirac(&r, &m.options), Err(DiracError::InconsistentLagrangian { .. })));
    assert_eq!(build_report(&m).exit_code(), 3);
}

#[test]
fn every_generator_corruption_is_detected() {
    for m in gauge_models() {
        assert!(noether_identity_check(&m).is_ok(), "{}", m.name);
        for gi in 0..m.generators.len() {
            for ci in 0..m.generators[gi].components.len() {
                let mut bad = m.clone();
                let c = &mut bad.generators[gi].components[ci];
                c.coefficient = c.coefficient.add(&Expression::one());
                assert!(
                    matches!(noether_identity_check(&bad), Err(GaugeError::IdentityViolated { .. })),
                    "{} generator {gi} component {ci}",
                    m.name
                );
            }
        }
    }
}

#[test]
fn first_class_count_matches_generator_count() {
    for m in gauge_models() {
        let rep = build_report(&m);
        assert_eq!(rep.verdict, Some(Verdict::Match), "{}", m.name);
        let d = rep.dirac.unwrap();
        let canonical_fc = d.constraints.iter().filter(|c| c.canonical && c.class == ClassLabel::First).count();
        assert_eq!(canonical_fc, m.generators.len(), "{}", m.name);
        assert_eq!(rep.conjecture.len(), m.generators.len());
    }
}

#[test]
fn conjecture_is_first_class_against_dirac_set() {
    for m in gauge_models() {
        let r = primary_constraints(&m).unwrap();
        let d = run_dirac(&r, &m.options).unwrap();
        for phi in conjecture_constraints(&m, &r).unwrap() {
            for c in &d.constraints {
                let b = bracket(&phi.expr, &c.expr, &r.coordinates);
                assert!(weak_reduce(&b, &d.constraints).is_zero(), "{}: {{{}, {}}}", m.name, phi.expr, c.expr);
            }
        }
    }
}

#[test]
fn symbolic_zero_implies_numeric_zero_on_bundled_surfaces() {
    for m in gauge_models() {
        let r = primary_constraints(&m).unwrap();
        let d = run_dirac(&r, &m.options).unwrap();
        let h = total_hamiltonian(&r);
        for c in &d.constraints {
            let b = bracket(&c.expr, &h, &r.coordinates);
            let zero = Expression::zero();
            let free = b.substitute(&d.multipliers.iter().map(|l| (l.clone(), zero.clone())).collect::<Vec<_>>()).unwrap();
            if weak_reduce(&free, &d.constraints).is_zero() {
                assert!(weak_zero_numeric(&free, &d.constraints, &m.options).unwrap().0, "{}", m.name);
            }
        }
    }
}

fn mix(cs: &[Constraint], seed: u64) -> Vec<Constraint> {
    // unit upper-triangular recombination: c_i + Σ_{j>i} k_ij c_j
    let mut rng = rng(seed);
    (0..cs.len())
        .map(|i| {
            let mut x = cs[i].expr.clone();
            for c in &cs[i + 1..] {
                let k: i64 = rand::Rng::gen_range(&mut rng, -3..=3);
                x = x.add(&c.expr.scale(&gaugecon::symexpr::rat(k)));
            }
            Constraint::new(x.numerator(), 0, Origin::Dirac).unwrap()
        })
        .collect()
}

#[test]
fn span_checks_are_stable_under_recombination() {
    let o = ModelOptions::default();
    for m in gauge_models() {
        let r = primary_constraints(&m).unwrap();
        let conj = conjecture_constraints(&m, &r).unwrap();
        assert!(span_equivalent(&conj, &conj, &o).equivalent);
        for seed in 0..3 {
            let mixed = mix(&conj, seed);
            let ab = span_equivalent(&conj, &mixed, &o);
            let ba = span_equivalent(&mixed, &conj, &o);
            assert!(ab.equivalent && ba.equivalent, "{}", m.name);
        }
    }
    let one = vec![Constraint::new(e("p(x)").numerator(), 0, Origin::Dirac).unwrap()];
    let two = vec![one[0].clone(), Constraint::new(e("p(y)").numerator(), 0, Origin::Dirac).unwrap()];
    assert_eq!(span_equivalent(&one, &two, &o).equivalent, span_equivalent(&two, &one, &o).equivalent);
}

#[test]
fn model_files_round_trip_through_render() {
    for m in gauge_models() {
        let again = parse_model(&render_model(&m)).unwrap();
        assert_eq!(again.coordinate_list(), m.coordinate_list());
        assert_eq!(again.lagrangian, m.lagrangian);
        assert_eq!(again.generators, m.generators);
    }
}

#[test]
fn reports_are_deterministic() {
    for m in gauge_models() {
        let a = serde_json::to_string(&build_report(&m)).unwrap();
        let b = serde_json::to_string(&build_report(&m)).unwrap();
        assert_eq!(a, b);
    }
}
