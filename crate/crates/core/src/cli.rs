//! Command-line front end. `run` returns the exit status and the text that
//! goes to standard output, so it can be driven from tests.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::compare::{build_report_with, AnalysisReport, NoetherSummary};
use crate::gaugegen::{conjecture_constraints, independence_check, noether_residues};
use crate::legendre::primary_constraints;
use crate::modelspec::{builtin_model, parse_model, ModelSpec, BUILTINS};

#[derive(Parser, Debug)]
#[command(name = "gaugecon", version, about = "Constraint analysis for singular Lagrangian models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full pipeline with every stage's output.
    Analyze(Input),
    /// Constraints obtained from the declared gauge generators only.
    Conjecture(Input),
    /// Full pipeline, summarized as the two constraint sets and a verdict.
    Compare(Input),
    /// Euler-Lagrange expressions and gauge identity residues.
    CheckIdentities(Input),
    /// The bundled models and their parameters.
    ListBuiltins {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Input {
    /// Model file.
    #[arg(conflicts_with = "builtin", required_unless_present = "builtin")]
    model: Option<String>,
    /// Bundled model name (see list-builtins).
    #[arg(long)]
    builtin: Option<String>,
    /// Builtin parameter, `key=value`; repeatable.
    #[arg(long = "param", value_parser = parse_kv, requires = "builtin")]
    params: Vec<(String, String)>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Stop the constraint algorithm after this many generations.
    #[arg(long)]
    max_generations: Option<u32>,
    /// Surface points per numeric weak-zero check.
    #[arg(long)]
    sample_count: Option<usize>,
    /// Absolute tolerance for numeric checks; must be positive.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Seed for surface sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Include per-stage wall-clock timings (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got `{s}`"))
}

fn load(input: &Input) -> Result<ModelSpec, String> {
    let mut m = match (&input.model, &input.builtin) {
        (Some(path), None) => {
            let src = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            let mut m = parse_model(&src).map_err(|e| format!("{path}:{e}"))?;
            if m.name == "model" {
                if let Some(stem) = std::path::Path::new(path).file_stem() {
                    m.name = stem.to_string_lossy().into_owned();
                }
            }
            m
        }
        (None, Some(name)) => builtin_model(name, &input.params).map_err(|e| e.to_string())?,
        _ => return Err("exactly one of a model file or --builtin is required".into()),
    };
    let o = &mut m.options;
    if let Some(g) = input.max_generations {
        o.max_generations = g;
    }
    if let Some(n) = input.sample_count {
        o.sample_count = n;
    }
    if let Some(t) = input.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(format!("tolerance must be positive, got {t}"));
        }
        o.numeric_tolerance = t;
    }
    if let Some(s) = input.seed {
        o.seed = s;
    }
    Ok(m)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.to_string());
        }
    };
    match cli.command {
        Command::ListBuiltins { format } => (0, list_builtins(format)),
        Command::Analyze(i) => with_model(&i, |m| report_command(m, &i, true)),
        Command::Compare(i) => with_model(&i, |m| report_command(m, &i, false)),
        Command::Conjecture(i) => with_model(&i, |m| conjecture_command(m, i.format)),
        Command::CheckIdentities(i) => with_model(&i, |m| identities_command(m, i.format)),
    }
}

fn with_model(i: &Input, f: impl FnOnce(&ModelSpec) -> (i32, String)) -> (i32, String) {
    match load(i) {
        Ok(m) => f(&m),
        Err(e) => (1, format!("error: {e}\n")),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn list_builtins(format: Format) -> String {
    #[derive(Serialize)]
    struct Entry {
        name: &'static str,
        summary: &'static str,
        params: &'static str,
    }
    let entries: Vec<Entry> = BUILTINS.iter().map(|b| Entry { name: b.name, summary: b.summary, params: b.params }).collect();
    if format == Format::Json {
        return json(&entries);
    }
    let mut s = String::new();
    for e in entries {
        let _ = writeln!(s, "{:<18} {}", e.name, e.summary);
        let _ = writeln!(s, "{:<18} params: {}", "", e.params);
    }
    s
}

fn report_command(m: &ModelSpec, i: &Input, full: bool) -> (i32, String) {
    let rep = build_report_with(m, i.timings);
    let out = match i.format {
        Format::Json => json(&rep),
        Format::Text if full => render_analysis(&rep),
        Format::Text => render_comparison(&rep),
    };
    (rep.exit_code(), out)
}

fn render_analysis(rep: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model: {} ({} coordinates)", rep.model_name, rep.dimension);
    if let Some(l) = &rep.legendre {
        let _ = writeln!(s, "\nlegendre: hessian rank {}", l.rank);
        for (p, e) in &l.momenta {
            let _ = writeln!(s, "  {p} = {e}");
        }
        for (v, e) in &l.solvable_velocities {
            let _ = writeln!(s, "  {v} -> {e}");
        }
        if !l.discardable.is_empty() {
            let _ = writeln!(s, "  discardable: {}", l.discardable.join(", "));
        }
        let _ = writeln!(s, "  H_c = {}", l.canonical_hamiltonian);
    }
    if rep.dirac.is_some() {
        s.push('\n');
        render_dirac(&mut s, rep);
    }
    if let Some(n) = &rep.noether {
        s.push('\n');
        render_noether(&mut s, n);
    }
    s.push('\n');
    render_tail(&mut s, rep);
    s
}

fn render_dirac(s: &mut String, rep: &AnalysisReport) {
    let Some(d) = &rep.dirac else { return };
    let _ = writeln!(s, "dirac: {} generation(s){}", d.generations_run, if d.consistent { "" } else { ", inconsistent" });
    let _ = writeln!(s, "  H_T = {}", d.total_hamiltonian);
    let max_gen = d.constraints.iter().map(|c| c.generation).max().unwrap_or(0);
    for g in 0..=max_gen {
        let in_gen: Vec<_> = d.constraints.iter().filter(|c| c.generation == g).collect();
        if in_gen.is_empty() {
            continue;
        }
        let _ = writeln!(s, "  generation {g}:");
        for c in in_gen {
            let sector = if c.canonical { "" } else { ", non-canonical" };
            let _ = writeln!(s, "    {}  [{}{}]", c.expr, class_name(c.class), sector);
        }
    }
    for (m, e) in &d.multiplier_equations {
        let _ = writeln!(s, "  fixes {m}: {e} = 0");
    }
    if let Some(w) = &d.witness {
        let _ = writeln!(s, "  contradiction: {w} = 0");
    }
}

fn class_name(c: crate::constraint::ClassLabel) -> String {
    c.to_string()
}

fn render_noether(s: &mut String, n: &NoetherSummary) {
    let _ = writeln!(s, "noether: identities {}", if n.identities_hold { "hold" } else { "FAIL" });
    for (q, e) in &n.euler_lagrange {
        let _ = writeln!(s, "  E[{q}] = {e}");
    }
    for (g, r) in &n.residues {
        let _ = writeln!(s, "  residue {g}: {r}");
    }
    if let Some(i) = n.independent {
        let _ = writeln!(s, "  generators independent: {i}");
    }
}

fn render_tail(s: &mut String, rep: &AnalysisReport) {
    if !rep.conjecture.is_empty() {
        let _ = writeln!(s, "conjecture:");
        for c in &rep.conjecture {
            let _ = writeln!(s, "  {}", c.expr);
        }
    }
    if let Some(c) = &rep.comparison {
        let _ = writeln!(
            s,
            "span: dirac in conjecture {}, conjecture in dirac {}, ranks {}/{}",
            c.dirac_in_conjecture_span, c.conjecture_in_dirac_span, c.rank_dirac, c.rank_conjecture
        );
    }
    for d in &rep.diagnostics {
        let sev = match d.severity {
            crate::compare::Severity::Info => "info",
            crate::compare::Severity::Warning => "warning",
            crate::compare::Severity::Error => "error",
        };
        let _ = write!(s, "{sev}: {}", d.message);
        if let Some(w) = &d.witness {
            let _ = write!(s, " (witness {w})");
        }
        s.push('\n');
    }
    let verdict = rep.verdict.map_or("none".to_string(), |v| serde_json::to_value(v).unwrap().as_str().unwrap().to_string());
    let _ = writeln!(s, "verdict: {verdict}");
    if let Some(t) = &rep.timings_ms {
        for (stage, ms) in t {
            let _ = writeln!(s, "  {stage}: {ms:.1} ms");
        }
    }
}

fn render_comparison(rep: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model: {}", rep.model_name);
    if let Some(d) = &rep.dirac {
        let fc: Vec<&str> = d
            .constraints
            .iter()
            .filter(|c| c.canonical && c.class == crate::constraint::ClassLabel::First)
            .map(|c| c.expr.as_str())
            .collect();
        let _ = writeln!(s, "dirac: {} constraint(s), {} first class, {} second class", d.constraints.len(), d.first_class, d.second_class);
        for e in fc {
            let _ = writeln!(s, "  {e}");
        }
    }
    render_tail(&mut s, rep);
    s
}

#[derive(Serialize)]
struct ConjectureOutput {
    model_name: String,
    discardable: Vec<String>,
    conjecture: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn conjecture_command(m: &ModelSpec, format: Format) -> (i32, String) {
    let mut out = ConjectureOutput { model_name: m.name.clone(), discardable: vec![], conjecture: vec![], error: None };
    let code = match primary_constraints(m) {
        Err(e) => {
            out.error = Some(e.to_string());
            1
        }
        Ok(r) => {
            out.discardable = r.discardable.iter().map(ToString::to_string).collect();
            match crate::gaugegen::noether_identity_check(m).and_then(|_| conjecture_constraints(m, &r)) {
                Ok(cs) => {
                    out.conjecture = cs.iter().map(|c| c.expr.to_string()).collect();
                    0
                }
                Err(e) => {
                    out.error = Some(e.to_string());
                    4
                }
            }
        }
    };
    if format == Format::Json {
        return (code, json(&out));
    }
    let mut s = format!("model: {}\n", out.model_name);
    if !out.discardable.is_empty() {
        let _ = writeln!(s, "discardable: {}", out.discardable.join(", "));
    }
    for c in &out.conjecture {
        let _ = writeln!(s, "  {c}");
    }
    if let Some(e) = &out.error {
        let _ = writeln!(s, "error: {e}");
    }
    (code, s)
}

fn identities_command(m: &ModelSpec, format: Format) -> (i32, String) {
    let n = match noether_residues(m) {
        Ok(n) => n,
        Err(e) => return (1, format!("error: {e}\n")),
    };
    let summary = NoetherSummary {
        euler_lagrange: n.euler_lagrange.iter().map(|(q, e)| (q.to_string(), e.to_string())).collect(),
        residues: n.residues.iter().map(|(g, r)| (g.clone(), r.to_string())).collect(),
        identities_hold: n.all_zero(),
        independent: independence_check(m).ok(),
    };
    let code = if summary.identities_hold { 0 } else { 4 };
    if format == Format::Json {
        return (code, json(&summary));
    }
    let mut s = format!("model: {}\n", m.name);
    render_noether(&mut s, &summary);
    (code, s)
}
