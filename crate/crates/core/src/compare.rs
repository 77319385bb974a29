//! Span equivalence of constraint sets and the consolidated analysis report.

use std::time::Instant;

use serde::Serialize;

use crate::constraint::{ClassLabel, Constraint, Origin};
use crate::diracflow::sample::generic_jacobian_rank;
use crate::diracflow::{classify, run_dirac, weak_verdict, DiracError, DiracResult, WeakReducer, WeakVerdict};
use crate::gaugegen::{conjecture_constraints, independence_check, noether_residues, GaugeError, NoetherReport};
use crate::legendre::{primary_constraints, LegendreResult};
use crate::modelspec::{ModelOptions, ModelSpec};
use crate::symexpr::{Expression, Poly, VarRef};

#[derive(Debug, Clone, PartialEq)]
pub struct SpanResult {
    pub equivalent: bool,
    pub a_in_b: bool,
    pub b_in_a: bool,
    pub rank_a: usize,
    pub rank_b: usize,
    /// First element of either set that does not reduce modulo the other.
    pub witness: Option<Expression>,
    pub indeterminate: bool,
}

fn included(a: &[Constraint], b: &[Constraint], options: &ModelOptions) -> (bool, Option<Expression>, bool) {
    let polys: Vec<Poly> = b.iter().map(|c| c.poly().clone()).collect();
    let reducer = WeakReducer::new(&polys);
    let mut indeterminate = false;
    for c in a {
        match weak_verdict(&reducer, c.poly(), &polys, options) {
            WeakVerdict::Zero => {}
            WeakVerdict::Indeterminate => indeterminate = true,
            WeakVerdict::NonZero => return (false, Some(c.expr.clone()), indeterminate),
        }
    }
    (true, None, indeterminate)
}

/// Mutual weak inclusion plus equal generic Jacobian rank.
pub fn span_equivalent(a: &[Constraint], b: &[Constraint], options: &ModelOptions) -> SpanResult {
    let (a_in_b, wa, ia) = included(a, b, options);
    let (b_in_a, wb, ib) = included(b, a, options);
    let pa: Vec<Poly> = a.iter().map(|c| c.poly().clone()).collect();
    let pb: Vec<Poly> = b.iter().map(|c| c.poly().clone()).collect();
    let rank_a = generic_jacobian_rank(&pa, options.seed, 3);
    let rank_b = generic_jacobian_rank(&pb, options.seed, 3);
    SpanResult {
        equivalent: a_in_b && b_in_a && rank_a == rank_b,
        a_in_b,
        b_in_a,
        rank_a,
        rank_b,
        witness: wa.or(wb),
        indeterminate: ia || ib,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Match,
    Mismatch,
    NoGaugeSector,
    Inapplicable,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub point: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageError {
    pub stage: &'static str,
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintEntry {
    pub expr: String,
    pub generation: u32,
    pub origin: Origin,
    pub class: ClassLabel,
    pub canonical: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LegendreSummary {
    pub rank: usize,
    pub momenta: Vec<(String, String)>,
    pub solvable_velocities: Vec<(String, String)>,
    pub primary_constraints: Vec<String>,
    pub discardable: Vec<String>,
    pub canonical_hamiltonian: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiracSummary {
    pub generations_run: u32,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub total_hamiltonian: String,
    pub constraints: Vec<ConstraintEntry>,
    pub multiplier_equations: Vec<(String, String)>,
    pub first_class: usize,
    pub second_class: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoetherSummary {
    pub euler_lagrange: Vec<(String, String)>,
    pub residues: Vec<(String, String)>,
    pub identities_hold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independent: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonSummary {
    pub dirac_canonical_first_class: Vec<String>,
    pub conjecture: Vec<String>,
    pub dirac_in_conjecture_span: bool,
    pub conjecture_in_dirac_span: bool,
    pub rank_dirac: usize,
    pub rank_conjecture: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub model_name: String,
    pub dimension: usize,
    pub generators: Vec<String>,
    pub legendre: Option<LegendreSummary>,
    pub dirac: Option<DiracSummary>,
    pub noether: Option<NoetherSummary>,
    pub conjecture: Vec<ConstraintEntry>,
    pub comparison: Option<ComparisonSummary>,
    /// `None` when a stage before the comparison failed.
    pub verdict: Option<Verdict>,
    pub error: Option<StageError>,
    pub diagnostics: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Vec<(String, f64)>>,
}

impl AnalysisReport {
    /// Process exit status: 0 success, 2 verdict other than a clean outcome,
    /// 3 inconsistent Lagrangian, 4 conjecture path aborted, 1 other errors.
    pub fn exit_code(&self) -> i32 {
        if let Some(e) = &self.error {
            return match e.kind {
                "InconsistentLagrangian" => 3,
                "ConjectureInapplicable" | "IdentityViolated" | "DegenerateGenerator" => 4,
                _ => 1,
            };
        }
        match self.verdict {
            Some(Verdict::Mismatch) | Some(Verdict::Indeterminate) => 2,
            _ => 0,
        }
    }
}

fn pairs(v: &[(VarRef, Expression)]) -> Vec<(String, String)> {
    v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

/// True iff `c` mentions no discardable coordinate nor its momentum.
pub fn in_canonical_sector(c: &Constraint, discardable: &[VarRef]) -> bool {
    !c.expr.mentions(|v| (v.is_coordinate() || v.is_momentum()) && discardable.contains(&v.coordinate_of()))
}

fn entry(c: &Constraint, discardable: &[VarRef]) -> ConstraintEntry {
    ConstraintEntry {
        expr: c.expr.to_string(),
        generation: c.generation,
        origin: c.origin,
        class: c.class_label,
        canonical: in_canonical_sector(c, discardable),
    }
}

fn legendre_summary(r: &LegendreResult) -> LegendreSummary {
    LegendreSummary {
        rank: r.rank,
        momenta: r.momenta_defs.iter().map(|(q, p)| (q.conjugate_momentum().to_string(), p.to_string())).collect(),
        solvable_velocities: pairs(&r.solvable_velocities),
        primary_constraints: r.primary_constraints.iter().map(|c| c.expr.to_string()).collect(),
        discardable: r.discardable.iter().map(ToString::to_string).collect(),
        canonical_hamiltonian: r.canonical_hamiltonian.to_string(),
    }
}

fn dirac_summary(d: &DiracResult, discardable: &[VarRef]) -> DiracSummary {
    let count = |l| d.constraints.iter().filter(|c| c.class_label == l).count();
    DiracSummary {
        generations_run: d.generations_run,
        consistent: d.consistent,
        witness: d.witness.as_ref().map(ToString::to_string),
        total_hamiltonian: d.total_hamiltonian.to_string(),
        constraints: d.constraints.iter().map(|c| entry(c, discardable)).collect(),
        multiplier_equations: pairs(&d.multiplier_equations),
        first_class: count(ClassLabel::First),
        second_class: count(ClassLabel::Second),
    }
}

fn noether_summary(n: &NoetherReport, independent: Option<bool>) -> NoetherSummary {
    NoetherSummary {
        euler_lagrange: pairs(&n.euler_lagrange),
        residues: n.residues.iter().map(|(g, r)| (g.clone(), r.to_string())).collect(),
        identities_hold: n.all_zero(),
        independent,
    }
}

fn dirac_error_kind(e: &DiracError) -> &'static str {
    match e {
        DiracError::InconsistentLagrangian { .. } => "InconsistentLagrangian",
        DiracError::GenerationLimitExceeded { .. } => "GenerationLimitExceeded",
        DiracError::OddSecondClassCount { .. } => "OddSecondClassCount",
        DiracError::SurfaceSamplingFailed => "SurfaceSamplingFailed",
    }
}

fn gauge_error_kind(e: &GaugeError) -> &'static str {
    match e {
        GaugeError::IdentityViolated { .. } => "IdentityViolated",
        GaugeError::SamplingDegenerate => "SamplingDegenerate",
        GaugeError::ConjectureInapplicable { .. } => "ConjectureInapplicable",
        GaugeError::DegenerateGenerator { .. } => "DegenerateGenerator",
        GaugeError::Symbolic(_) => "SymbolicError",
    }
}

struct Clock {
    enabled: bool,
    last: Instant,
    laps: Vec<(String, f64)>,
}

impl Clock {
    fn lap(&mut self, stage: &str) {
        if self.enabled {
            let now = Instant::now();
            self.laps.push((stage.to_string(), (now - self.last).as_secs_f64() * 1e3));
            self.last = now;
        }
    }
}

pub fn build_report(m: &ModelSpec) -> AnalysisReport {
    build_report_with(m, false)
}

/// Runs every stage; a failing stage is recorded in `error` and the report
/// keeps whatever earlier stages produced.
pub fn build_report_with(m: &ModelSpec, timings: bool) -> AnalysisReport {
    let mut clock = Clock { enabled: timings, last: Instant::now(), laps: Vec::new() };
    let mut rep = AnalysisReport {
        model_name: m.name.clone(),
        dimension: m.dimension(),
        generators: m.generators.iter().map(|g| g.parameter_name.clone()).collect(),
        legendre: None,
        dirac: None,
        noether: None,
        conjecture: Vec::new(),
        comparison: None,
        verdict: None,
        error: None,
        diagnostics: Vec::new(),
        timings_ms: None,
    };
    run_stages(m, &mut rep, &mut clock);
    if timings {
        rep.timings_ms = Some(clock.laps);
    }
    rep
}

fn fail(rep: &mut AnalysisReport, stage: &'static str, kind: &'static str, message: String) {
    rep.diagnostics.push(Diagnostic { severity: Severity::Error, message: message.clone(), witness: None, point: vec![] });
    rep.error = Some(StageError { stage, kind, message });
}

fn run_stages(m: &ModelSpec, rep: &mut AnalysisReport, clock: &mut Clock) {
    let o = &m.options;
    let r = match primary_constraints(m) {
        Ok(r) => r,
        Err(e) => {
            let kind = match e {
                crate::legendre::LegendreError::NonQuadraticVelocity { .. } => "NonQuadraticVelocity",
                crate::legendre::LegendreError::RankNotConstant { .. } => "RankNotConstant",
                crate::legendre::LegendreError::VelocityDependentHamiltonian { .. } => "VelocityDependentHamiltonian",
            };
            return fail(rep, "legendre", kind, e.to_string());
        }
    };
    rep.legendre = Some(legendre_summary(&r));
    clock.lap("legendre");

    let dirac = run_dirac(&r, o).and_then(|d| classify(d, &r.coordinates, o));
    clock.lap("dirac");
    let d = match dirac {
        Ok(d) => d,
        Err(e) => {
            match &e {
                DiracError::InconsistentLagrangian { partial, .. } | DiracError::GenerationLimitExceeded { partial, .. } => {
                    rep.dirac = Some(dirac_summary(partial, &r.discardable));
                }
                _ => {}
            }
            return fail(rep, "dirac", dirac_error_kind(&e), e.to_string());
        }
    };
    rep.dirac = Some(dirac_summary(&d, &r.discardable));
    for x in &d.indeterminate {
        rep.diagnostics.push(Diagnostic {
            severity: Severity::Warning,
            message: "symbolic remainder vanishes at every surface sample".into(),
            witness: Some(x.to_string()),
            point: vec![],
        });
    }

    let fc: Vec<Constraint> = d
        .constraints
        .iter()
        .filter(|c| c.class_label == ClassLabel::First && in_canonical_sector(c, &r.discardable))
        .cloned()
        .collect();

    let conj = if m.generators.is_empty() {
        Vec::new()
    } else {
        let noether = match noether_residues(m) {
            Ok(n) => n,
            Err(e) => return fail(rep, "noether", "SymbolicError", e.to_string()),
        };
        let independent = independence_check(m).ok();
        rep.noether = Some(noether_summary(&noether, independent));
        clock.lap("noether");
        if let Some((g, res)) = noether.residues.iter().find(|(_, res)| !res.is_zero()) {
            let e = GaugeError::IdentityViolated { generator: g.clone(), residue: res.clone() };
            rep.verdict = Some(Verdict::Inapplicable);
            return fail(rep, "noether", "IdentityViolated", e.to_string());
        }
        if independent == Some(false) {
            rep.diagnostics.push(Diagnostic {
                severity: Severity::Warning,
                message: "declared generators are linearly dependent".into(),
                witness: None,
                point: vec![],
            });
        }
        match conjecture_constraints(m, &r) {
            Ok(c) => c,
            Err(e) => {
                rep.verdict = Some(Verdict::Inapplicable);
                return fail(rep, "conjecture", gauge_error_kind(&e), e.to_string());
            }
        }
    };
    rep.conjecture = conj.iter().map(|c| entry(c, &r.discardable)).collect();
    clock.lap("conjecture");

    if conj.is_empty() && fc.is_empty() {
        rep.verdict = Some(Verdict::NoGaugeSector);
        return;
    }
    let s = span_equivalent(&fc, &conj, o);
    clock.lap("compare");
    rep.comparison = Some(ComparisonSummary {
        dirac_canonical_first_class: fc.iter().map(|c| c.expr.to_string()).collect(),
        conjecture: conj.iter().map(|c| c.expr.to_string()).collect(),
        dirac_in_conjecture_span: s.a_in_b,
        conjecture_in_dirac_span: s.b_in_a,
        rank_dirac: s.rank_a,
        rank_conjecture: s.rank_b,
        witness: s.witness.as_ref().map(ToString::to_string),
    });
    let verdict = if s.equivalent && fc.len() == conj.len() {
        Verdict::Match
    } else if s.indeterminate || !d.indeterminate.is_empty() {
        Verdict::Indeterminate
    } else {
        Verdict::Mismatch
    };
    if verdict == Verdict::Mismatch {
        let why = if s.witness.is_some() {
            "constraint outside the other set's span".to_string()
        } else {
            format!("rank or count differs: dirac {}/{}, conjecture {}/{}", s.rank_a, fc.len(), s.rank_b, conj.len())
        };
        let witness = s.witness.as_ref().map(ToString::to_string).or_else(|| fc.first().map(|c| c.expr.to_string()));
        rep.diagnostics.push(Diagnostic { severity: Severity::Warning, message: why, witness, point: vec![] });
    }
    rep.verdict = Some(verdict);
}
