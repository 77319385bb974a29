//! One pass/fail line per acceptance criterion, written straight to stderr so
//! the lines show up without `--nocapture`. The test fails if any criterion
//! fails.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use common::trees::*;
use common::*;
use gaugecon::compare::{build_report, Verdict};
use gaugecon::constraint::ClassLabel;
use gaugecon::diracflow::{classify, run_dirac, weak_reduce, DiracError, DiracResult};
use gaugecon::gaugegen::{noether_identity_check, GaugeError};
use gaugecon::legendre::primary_constraints;
use gaugecon::modelspec::{parse_model, ModelSpec};
use gaugecon::symexpr::{Expression, VarRef};
use proptest::test_runner::{Config, TestCaseError, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))
}

fn dirac(m: &ModelSpec) -> Result<DiracResult, String> {
    let r = primary_constraints(m).map_err(|e| e.to_string())?;
    let d = run_dirac(&r, &m.options).map_err(|e| e.to_string())?;
    classify(d, &r.coordinates, &m.options).map_err(|e| e.to_string())
}

fn toy_gauge() -> Outcome {
    let start = Instant::now();
    let m = model("toy_gauge", &[]);
    let d = dirac(&m)?;
    let got: Vec<(String, u32, ClassLabel)> =
        d.constraints.iter().map(|c| (c.expr.to_string(), c.generation, c.class_label)).collect();
    let want = vec![("p(y)".to_string(), 0, ClassLabel::First), ("p(x)".to_string(), 1, ClassLabel::First)];
    ensure(got == want, format!("constraints {got:?}"))?;
    let rep = build_report(&m);
    let conj: Vec<&str> = rep.conjecture.iter().map(|c| c.expr.as_str()).collect();
    ensure(conj == ["p(x)"], format!("conjecture {conj:?}"))?;
    ensure(rep.verdict == Some(Verdict::Match), format!("verdict {:?}", rep.verdict))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("{:?}", start.elapsed()))
}

fn maxwell_lattice() -> Outcome {
    let start = Instant::now();
    let m = model("maxwell_lattice", &[("N", "2")]);
    let d = dirac(&m)?;
    let gen = |g| d.constraints.iter().filter(|c| c.generation == g).collect::<Vec<_>>();
    let (primaries, secondaries) = (gen(0), gen(1));
    ensure(primaries.len() == 8 && secondaries.len() == 8, format!("{} primaries, {} secondaries", primaries.len(), secondaries.len()))?;
    ensure(d.constraints.len() == 16, "extra generations")?;
    ensure(d.constraints.iter().all(|c| c.class_label == ClassLabel::First), "not all first class")?;
    let oracle: Vec<Expression> = sites(2).into_iter().map(|n| lattice_gauss_law(n, 2)).collect();
    let sec: Vec<Expression> = secondaries.iter().map(|c| c.expr.clone()).collect();
    ensure(normalized_set(&sec) == normalized_set(&oracle), "secondaries differ from lattice Gauss laws")?;
    let rep = build_report(&m);
    let noether = rep.noether.as_ref().ok_or("no Noether section")?;
    ensure(noether.identities_hold && noether.residues.iter().all(|(_, r)| r == "0"), "nonzero Noether residue")?;
    ensure(rep.verdict == Some(Verdict::Match), format!("verdict {:?}", rep.verdict))?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("{:?}", start.elapsed()))
}

fn ym_mechanics() -> Outcome {
    let start = Instant::now();
    let m = model("ym_mechanics", &[]);
    let d = dirac(&m)?;
    let g: Vec<Expression> = d.constraints.iter().filter(|c| c.generation == 1).map(|c| c.expr.clone()).collect();
    ensure(g.len() == 3, format!("{} secondaries", g.len()))?;
    ensure(d.constraints.iter().all(|c| c.class_label == ClassLabel::First), "not all first class")?;
    let coords = m.coordinate_list();
    let vars: BTreeSet<VarRef> = coords.iter().flat_map(|q| [q.clone(), q.conjugate_momentum()]).collect();
    let mut rng = rng(5);
    let mut worst = 0.0f64;
    for a in 0..3 {
        for b in a + 1..3 {
            let br = bracket(&g[a], &g[b], &coords);
            let pts: Vec<_> = (0..53).map(|_| phase_point(vars.iter().cloned(), &mut rng)).collect();
            let rows = pts[..3].iter().map(|p| g.iter().map(|gc| gc.evaluate_f64(p).unwrap()).collect()).collect();
            let rhs = pts[..3].iter().map(|p| br.evaluate_f64(p).unwrap()).collect();
            let k = solve_f64(rows, rhs).ok_or("singular fit")?;
            for p in &pts[3..] {
                let fit: f64 = g.iter().zip(&k).map(|(gc, kc)| gc.evaluate_f64(p).unwrap() * kc).sum();
                worst = worst.max((fit - br.evaluate_f64(p).unwrap()).abs());
            }
            let c = 3 - a - b;
            for (i, kc) in k.iter().enumerate() {
                let weight = if i == c { levi_civita(a + 1, b + 1, c + 1).abs() as f64 } else { 0.0 };
                ensure((kc.abs() - weight).abs() < 1e-9, format!("weights {k:?} for ({a},{b})"))?;
            }
            let combo = g[c].scale(&gaugecon::symexpr::rat(k[c].round() as i64));
            ensure(br.sub(&combo).is_zero(), format!("exact closure fails for ({a},{b})"))?;
            ensure(weak_reduce(&br, &d.constraints).is_zero(), "bracket not weakly zero")?;
        }
    }
    ensure(worst < 1e-9, format!("closure residual {worst:e}"))?;
    let rep = build_report(&m);
    ensure(rep.verdict == Some(Verdict::Match), format!("verdict {:?}", rep.verdict))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("{:?}, closure residual {worst:.1e}", start.elapsed()))
}

fn controls() -> Outcome {
    let osc = build_report(&model("oscillator", &[]));
    ensure(osc.verdict == Some(Verdict::NoGaugeSector), "oscillator verdict")?;
    ensure(osc.dirac.is_some_and(|d| d.constraints.is_empty()), "oscillator has constraints")?;

    let m = model("second_class_toy", &[]);
    let d = dirac(&m)?;
    ensure(d.constraints.len() == 2, "second_class_toy count")?;
    ensure(d.constraints.iter().all(|c| c.class_label == ClassLabel::Second), "second_class_toy labels")?;
    let found = normalized_set(&constraint_exprs(&d.constraints));
    ensure(found == normalized_set(&[e("p(x) - y"), e("p(y)")]), format!("constraints {found:?}"))?;
    let b = bracket(&e("p(x) - y"), &e("p(y)"), &m.coordinate_list());
    ensure(b == Expression::int(-1), format!("bracket {b}"))?;
    let rep = build_report(&m);
    ensure(rep.conjecture.is_empty(), "second_class_toy conjecture nonempty")?;
    ensure(rep.verdict == Some(Verdict::NoGaugeSector), "second_class_toy verdict")?;

    let m = parse_model(include_str!("../models/inconsistent.model")).map_err(|e| e.to_string())?;
    let r = primary_constraints(&m).map_err(|e| e.to_string())?;
    ensure(matches!(run_dirac(&r, &m.options), Err(DiracError::InconsistentLagrangian { .. })), "L = x accepted")?;
    ensure(build_report(&m).exit_code() == 3, "L = x exit code")?;
    Ok("oscillator, second_class_toy, L = x".into())
}

fn property_suites() -> Outcome {
    let run = |cases: u32, name: &str, test: &mut dyn FnMut(&mut TestRunner) -> Result<(), String>| {
        let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
        test(&mut runner).map_err(|e| format!("{name}: {e}"))
    };
    run(200, "antisymmetry", &mut |r| {
        r.run(&(phase_expr(), phase_expr()), |(f, g)| check(pb(&f, &g) == pb(&g, &f).neg()))
            .map_err(|e| e.to_string())
    })?;
    run(200, "leibniz", &mut |r| {
        r.run(&(phase_expr(), phase_expr(), phase_expr()), |(f, g, h)| {
            check(pb(&f, &g.mul(&h)) == pb(&f, &g).mul(&h).add(&g.mul(&pb(&f, &h))))
        })
        .map_err(|e| e.to_string())
    })?;
    run(200, "jacobi", &mut |r| {
        r.run(&(phase_expr(), phase_expr(), phase_expr()), |(f, g, h)| {
            check(pb(&f, &pb(&g, &h)).add(&pb(&g, &pb(&h, &f))).add(&pb(&h, &pb(&f, &g))).is_zero())
        })
        .map_err(|e| e.to_string())
    })?;
    run(1000, "canonicalize", &mut |r| {
        r.run(&phase_expr(), |x| {
            let once = x.canonicalize();
            check(once == x && once.canonicalize() == once)
        })
        .map_err(|e| e.to_string())
    })?;
    let points = proptest::collection::vec(proptest::collection::vec(-3.0f64..3.0, 4), 50);
    run(200, "symbolic vs numeric zero", &mut |r| {
        r.run(&(tree(4), tree(4), proptest::bool::ANY, points.clone()), |(a, b, same, pts)| {
            let b = if same { rewrite(&a) } else { b };
            let vars = phase_vars();
            let symbolic = to_expr(&a, &vars).sub(&to_expr(&b, &vars)).is_zero();
            let numeric = pts.iter().all(|x| {
                let (u, v) = (eval(&a, x), eval(&b, x));
                (u - v).abs() <= 1e-9 * (1.0 + u.abs() + v.abs())
            });
            check(symbolic == numeric && (!same || symbolic))
        })
        .map_err(|e| e.to_string())
    })?;
    Ok("200 triples per bracket law, 1000 canonicalize cases, 200 zero tests at 50 points".into())
}

fn check(ok: bool) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail("law violated"))
    }
}

fn robustness() -> Outcome {
    let (mut tried, mut caught) = (0, 0);
    for m in gauge_models() {
        ensure(noether_identity_check(&m).is_ok(), format!("{} fails uncorrupted", m.name))?;
        for gi in 0..m.generators.len() {
            for ci in 0..m.generators[gi].components.len() {
                let mut bad = m.clone();
                let c = &mut bad.generators[gi].components[ci];
                c.coefficient = c.coefficient.add(&Expression::one());
                tried += 1;
                if matches!(noether_identity_check(&bad), Err(GaugeError::IdentityViolated { .. })) {
                    caught += 1;
                }
            }
        }
    }
    ensure(caught == tried, format!("{caught}/{tried} corruptions detected"))?;
    Ok(format!("{caught}/{tried} corruptions detected"))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_gaugecon"))
            .args(["compare", "--builtin", "ym_mechanics", "--format", "json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && !a.stdout.is_empty(), format!("exit {:?}", a.status.code()))?;
    ensure(a.stdout == b.stdout, "outputs differ")?;
    Ok(format!("{} bytes identical", a.stdout.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("1 toy_gauge", toy_gauge),
        ("2 maxwell_lattice N=2", maxwell_lattice),
        ("3 ym_mechanics", ym_mechanics),
        ("4 controls", controls),
        ("5 property suites", property_suites),
        ("6 corruption detection", robustness),
        ("7 determinism", determinism),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stderr().lock();
    writeln!(out).unwrap();
    for (name, f) in criteria {
        let line = match f() {
            Ok(detail) => format!("PASS {name}: {detail}"),
            Err(why) => {
                failed.push(name);
                format!("FAIL {name}: {why}")
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
