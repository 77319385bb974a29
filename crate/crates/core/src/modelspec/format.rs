//! Plain-text model files.
//!
//! ```text
//! # comment
//! [vars]
//! x
//! y discardable
//! A[1..3, 0..1]          # inclusive index ranges
//! [lagrangian]
//! (xdot - y)^2 / 2       # may span several lines; `x'` and `xdot` both denote the velocity
//! [generators]
//! eps x 0 = 1            # <parameter> <coordinate> <k> = <coefficient>
//! eps y 1 = 1
//! [options]
//! name = toy
//! max_generations = 10
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use super::{CoordinateDecl, GaugeGenerator, GeneratorComponent, ModelError, ModelOptions, ModelSpec};
use crate::symexpr::{parse_at, parse_expression_with, Expression, Resolve, ResolveError, SymError, VarRef};

struct ModelResolver<'a> {
    decls: HashMap<&'a str, &'a CoordinateDecl>,
}

impl<'a> ModelResolver<'a> {
    fn new(decls: &'a [CoordinateDecl]) -> Self {
        ModelResolver { decls: decls.iter().map(|d| (d.base.as_str(), d)).collect() }
    }

    fn lookup(&self, name: &str, indices: &[u32]) -> Result<(), ResolveError> {
        match self.decls.get(name) {
            None => Err(ResolveError::UnknownSymbol),
            Some(d) if d.contains(indices) => Ok(()),
            Some(_) => Err(ResolveError::IndexOutOfRange),
        }
    }
}

impl Resolve for ModelResolver<'_> {
    fn coordinate(&self, name: &str, indices: &[u32], primes: u32) -> Result<VarRef, ResolveError> {
        if self.decls.contains_key(name) {
            self.lookup(name, indices)?;
            return Ok(VarRef::jet(name, indices, primes));
        }
        for (suffix, order) in [("dddot", 3), ("ddot", 2), ("dot", 1)] {
            if let Some(base) = name.strip_suffix(suffix) {
                if self.decls.contains_key(base) {
                    self.lookup(base, indices)?;
                    return Ok(VarRef::jet(base, indices, order + primes));
                }
            }
        }
        Err(ResolveError::UnknownSymbol)
    }

    fn momentum(&self, name: &str, indices: &[u32]) -> Result<VarRef, ResolveError> {
        self.lookup(name, indices)?;
        Ok(VarRef::momentum(name, indices))
    }

    fn multiplier(&self, _name: &str, _indices: &[u32]) -> Result<VarRef, ResolveError> {
        Err(ResolveError::UnknownSymbol)
    }
}

fn lift(e: SymError) -> ModelError {
    match e {
        SymError::Parse { line, column, message } => ModelError::Parse { line, column, message },
        SymError::UnknownSymbol { name, line, column } => ModelError::UnknownSymbol { name, line, column },
        SymError::IndexOutOfRange { name, line, column } => ModelError::IndexOutOfRange { name, line, column },
        other => ModelError::Parse { line: 0, column: 0, message: other.to_string() },
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> ModelError {
    ModelError::Parse { line, column, message: message.into() }
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    None,
    Vars,
    Lagrangian,
    Generators,
    Options,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_decl(text: &str, line: usize, col: usize) -> Result<CoordinateDecl, ModelError> {
    let mut body = text.trim();
    let mut hint = None;
    if let Some(rest) = body.strip_suffix("discardable") {
        if rest.is_empty() || rest.ends_with(char::is_whitespace) || rest.ends_with(']') {
            hint = Some(true);
            body = rest.trim_end();
        }
    }
    let (name, ranges_txt) = match body.find('[') {
        Some(i) => {
            let close = body.rfind(']').ok_or_else(|| parse_err(line, col + i, "unclosed `[`"))?;
            (&body[..i], Some(&body[i + 1..close]))
        }
        None => (body, None),
    };
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') || name.starts_with(|c: char| c.is_ascii_digit()) {
        return Err(parse_err(line, col, format!("invalid coordinate name `{name}`")));
    }
    let mut index_ranges = Vec::new();
    if let Some(txt) = ranges_txt {
        for part in txt.split(',') {
            let part = part.trim();
            let (lo, hi) = match part.split_once("..") {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (part, part),
            };
            let lo: u32 = lo.parse().map_err(|_| parse_err(line, col, format!("bad index range `{part}`")))?;
            let hi: u32 = hi.parse().map_err(|_| parse_err(line, col, format!("bad index range `{part}`")))?;
            if lo > hi {
                return Err(parse_err(line, col, format!("empty index range `{part}`")));
            }
            index_ranges.push(lo..=hi);
        }
    }
    Ok(CoordinateDecl { base: name.to_string(), index_ranges, discardable_hint: hint })
}

fn parse_option(opts: &mut ModelOptions, name: &mut String, key: &str, value: &str, line: usize) -> Result<(), ModelError> {
    let bad = |what: &str| parse_err(line, 1, format!("invalid value `{value}` for {what}"));
    match key {
        "name" => *name = value.to_string(),
        "max_generations" => opts.max_generations = value.parse().map_err(|_| bad(key))?,
        "sample_count" => opts.sample_count = value.parse().map_err(|_| bad(key))?,
        "numeric_tolerance" => {
            let t: f64 = value.parse().map_err(|_| bad(key))?;
            if !(t > 0.0) {
                return Err(bad(key));
            }
            opts.numeric_tolerance = t;
        }
        "seed" => opts.seed = value.parse().map_err(|_| bad(key))?,
        "jet_cap" => opts.jet_cap = value.parse().map_err(|_| bad(key))?,
        "quadratic_velocity" => opts.quadratic_velocity = value.parse().map_err(|_| bad(key))?,
        _ => return Err(parse_err(line, 1, format!("unknown option `{key}`"))),
    }
    Ok(())
}

/// Parses and validates a model file.
pub fn parse_model(source: &str) -> Result<ModelSpec, ModelError> {
    let mut section = Section::None;
    let mut decls: Vec<CoordinateDecl> = Vec::new();
    let mut lagrangian_lines: Vec<(usize, String)> = Vec::new();
    let mut generator_lines: Vec<(usize, String)> = Vec::new();
    let mut options = ModelOptions::default();
    let mut name = String::from("model");
    let mut seen_sections = BTreeSet::new();

    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let text = strip_comment(raw);
        let trimmed = text.trim();
        if trimmed.is_empty() {
            if section == Section::Lagrangian {
                lagrangian_lines.push((line, String::new()));
            }
            continue;
        }
        if trimmed.starts_with('[') && trimmed.ends_with(']') && section_name(trimmed).is_some() {
            section = section_name(trimmed).unwrap();
            if !seen_sections.insert(trimmed.to_string()) {
                return Err(parse_err(line, 1, format!("repeated section {trimmed}")));
            }
            continue;
        }
        let col = text.len() - text.trim_start().len() + 1;
        match section {
            Section::None => return Err(parse_err(line, col, "content before the first section")),
            Section::Vars => decls.push(parse_decl(trimmed, line, col)?),
            Section::Lagrangian => lagrangian_lines.push((line, text.to_string())),
            Section::Generators => generator_lines.push((line, text.to_string())),
            Section::Options => {
                let (k, v) = trimmed
                    .split_once('=')
                    .ok_or_else(|| parse_err(line, col, "expected `key = value`"))?;
                parse_option(&mut options, &mut name, k.trim(), v.trim(), line)?;
            }
        }
    }

    let mut seen = BTreeSet::new();
    for d in &decls {
        for v in d.expand() {
            if !seen.insert(v.clone()) {
                return Err(ModelError::DuplicateCoordinate(v.to_string()));
            }
        }
    }
    let resolver = ModelResolver::new(&decls);

    while lagrangian_lines.last().is_some_and(|(_, t)| t.trim().is_empty()) {
        lagrangian_lines.pop();
    }
    let Some(&(first_line, _)) = lagrangian_lines.first() else {
        return Err(parse_err(source.lines().count().max(1), 1, "missing [lagrangian] section"));
    };
    let lag_src: String = lagrangian_lines.iter().map(|(_, t)| t.as_str()).collect::<Vec<_>>().join("\n");
    let lagrangian = parse_at(&lag_src, &resolver, first_line, 1).map_err(|e| match e {
        SymError::DenominatorViolation(m) => ModelError::NonPolynomialLagrangian { line: first_line, message: format!("velocity or momentum in a denominator: {m}") },
        SymError::DivisionByZero => ModelError::NonPolynomialLagrangian { line: first_line, message: "division by zero".into() },
        other => lift(other),
    })?;
    if let Some(v) = lagrangian.vars().into_iter().find(|v| !(v.is_configuration() && v.jet_order() <= 1)) {
        return Err(ModelError::NonPolynomialLagrangian {
            line: first_line,
            message: format!("`{v}` may not appear in a Lagrangian (only coordinates and velocities)"),
        });
    }

    let mut generators: Vec<GaugeGenerator> = Vec::new();
    for (line, text) in &generator_lines {
        let comp_err = |m: String| ModelError::MalformedGenerator { line: *line, message: m };
        let (lhs, rhs) = text.split_once('=').ok_or_else(|| comp_err("expected `<parameter> <coordinate> <k> = <coefficient>`".into()))?;
        let words: Vec<&str> = lhs.split_whitespace().collect();
        if words.len() < 3 {
            return Err(comp_err("expected `<parameter> <coordinate> <k> = <coefficient>`".into()));
        }
        let param = words[0];
        let k: u32 = words[words.len() - 1]
            .parse()
            .map_err(|_| comp_err(format!("derivative order `{}` is not a non-negative integer", words[words.len() - 1])))?;
        let coord_txt = words[1..words.len() - 1].join(" ");
        let coord_col = lhs.find(words[1]).unwrap_or(0) + 1;
        let ce = parse_at(&coord_txt, &resolver, *line, coord_col).map_err(lift)?;
        let coordinate = match ce.vars().into_iter().collect::<Vec<_>>().as_slice() {
            [v] if v.is_coordinate() && ce == Expression::var(v.clone()) => v.clone(),
            _ => return Err(comp_err(format!("`{coord_txt}` is not a single coordinate"))),
        };
        let rhs_col = lhs.len() + 2;
        let coefficient = parse_at(rhs, &resolver, *line, rhs_col).map_err(lift)?;
        if let Some(v) = coefficient.vars().into_iter().find(|v| !v.is_coordinate()) {
            return Err(comp_err(format!("coefficient mentions `{v}`; only coordinates are allowed")));
        }
        if coefficient.is_zero() {
            return Err(comp_err("zero coefficient".into()));
        }
        let comp = GeneratorComponent { coordinate, k, coefficient };
        match generators.iter_mut().find(|g| g.parameter_name == param) {
            Some(g) => {
                if g.components.iter().any(|c| c.coordinate == comp.coordinate && c.k == comp.k) {
                    return Err(comp_err(format!("repeated component ({}, k={k})", comp.coordinate)));
                }
                g.components.push(comp)
            }
            None => generators.push(GaugeGenerator { parameter_name: param.to_string(), components: vec![comp] }),
        }
    }
    ModelSpec::new(name, decls, lagrangian, generators, options).map_err(|e| match e {
        ModelError::MalformedGenerator { line: 0, message } => ModelError::MalformedGenerator {
            line: generator_lines.first().map_or(0, |(l, _)| *l),
            message,
        },
        other => other,
    })
}

fn section_name(s: &str) -> Option<Section> {
    match s {
        "[vars]" => Some(Section::Vars),
        "[lagrangian]" => Some(Section::Lagrangian),
        "[generators]" => Some(Section::Generators),
        "[options]" => Some(Section::Options),
        _ => None,
    }
}

/// Renders a model in the file format; `parse_model` reproduces it exactly.
pub fn render_model(m: &ModelSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# model: {}", m.name);
    out.push_str("[vars]\n");
    for d in &m.coordinates {
        out.push_str(&d.base);
        if !d.index_ranges.is_empty() {
            let parts: Vec<String> = d
                .index_ranges
                .iter()
                .map(|r| if r.start() == r.end() { r.start().to_string() } else { format!("{}..{}", r.start(), r.end()) })
                .collect();
            let _ = write!(out, "[{}]", parts.join(", "));
        }
        if d.discardable_hint == Some(true) {
            out.push_str(" discardable");
        }
        out.push('\n');
    }
    out.push_str("[lagrangian]\n");
    let _ = writeln!(out, "{}", m.lagrangian);
    if !m.generators.is_empty() {
        out.push_str("[generators]\n");
        for g in &m.generators {
            for c in &g.components {
                let _ = writeln!(out, "{} {} {} = {}", g.parameter_name, c.coordinate, c.k, c.coefficient);
            }
        }
    }
    let o = &m.options;
    out.push_str("[options]\n");
    let _ = writeln!(out, "name = {}", m.name);
    let _ = writeln!(out, "max_generations = {}", o.max_generations);
    let _ = writeln!(out, "sample_count = {}", o.sample_count);
    let _ = writeln!(out, "numeric_tolerance = {:e}", o.numeric_tolerance);
    let _ = writeln!(out, "seed = {}", o.seed);
    let _ = writeln!(out, "jet_cap = {}", o.jet_cap);
    let _ = writeln!(out, "quadratic_velocity = {}", o.quadratic_velocity);
    out
}

/// Parses an expression against a model's declared coordinates.
pub fn parse_in_model(m: &ModelSpec, src: &str) -> Result<Expression, ModelError> {
    parse_expression_with(src, &ModelResolver::new(&m.coordinates)).map_err(lift)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "\
# toy gauge model
[vars]
x
y
[lagrangian]
(xdot - y)^2 / 2
[generators]
eps x 0 = 1
eps y 1 = 1
";

    #[test]
    fn parses_toy_model() {
        let m = parse_model(TOY).unwrap();
        assert_eq!(m.dimension(), 2);
        assert_eq!(m.lagrangian, "x'^2/2 - x'*y + y^2/2".parse().unwrap());
        assert_eq!(m.generators.len(), 1);
        assert_eq!(m.generators[0].components.len(), 2);
    }

    #[test]
    fn unknown_symbol_reports_position() {
        let src = "[vars]\nx\ny\n[lagrangian]\nxdot^2 + z\n";
        match parse_model(src) {
            Err(ModelError::UnknownSymbol { name, line: 5, column: 10 }) => assert_eq!(name, "z"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cubic_velocity_accepted_by_parser() {
        let src = "[vars]\nx\n[lagrangian]\nxdot^3\n[options]\nquadratic_velocity = true\n";
        let m = parse_model(src).unwrap();
        assert!(m.options.quadratic_velocity);
    }

    #[test]
    fn index_ranges_are_checked() {
        let src = "[vars]\nA[1..3]\n[lagrangian]\nA[4]'^2\n";
        assert!(matches!(parse_model(src), Err(ModelError::IndexOutOfRange { line: 4, .. })));
        let src = "[vars]\nA[1..3]\n[lagrangian]\nA[1,1]'^2\n";
        assert!(matches!(parse_model(src), Err(ModelError::IndexOutOfRange { .. })));
    }

    #[test]
    fn duplicates_and_malformed_generators() {
        assert!(matches!(
            parse_model("[vars]\nx\nx\n[lagrangian]\nxdot^2\n"),
            Err(ModelError::DuplicateCoordinate(_))
        ));
        assert!(matches!(
            parse_model("[vars]\nx\n[lagrangian]\nxdot^2\n[generators]\neps x = 1\n"),
            Err(ModelError::MalformedGenerator { line: 6, .. })
        ));
        assert!(matches!(
            parse_model("[vars]\nx\n[lagrangian]\nxdot^2\n[generators]\neps x 0 = xdot\n"),
            Err(ModelError::MalformedGenerator { line: 6, .. })
        ));
        assert!(matches!(
            parse_model("[vars]\nx\n[lagrangian]\nxdot^2\n[generators]\neps x 0 = 1\neps x 0 = 2\n"),
            Err(ModelError::MalformedGenerator { line: 7, .. })
        ));
    }

    #[test]
    fn velocity_denominator_rejected() {
        assert!(matches!(
            parse_model("[vars]\nx\n[lagrangian]\n1/xdot\n"),
            Err(ModelError::NonPolynomialLagrangian { .. })
        ));
        assert!(matches!(
            parse_model("[vars]\nx\n[lagrangian]\nx''\n"),
            Err(ModelError::NonPolynomialLagrangian { .. })
        ));
    }

    #[test]
    fn syntax_error_position() {
        match parse_model("[vars]\nx\n[lagrangian]\n(xdot + \n") {
            Err(ModelError::Parse { line, .. }) => assert!(line >= 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn render_round_trip() {
        let m = parse_model(TOY).unwrap();
        let again = parse_model(&render_model(&m)).unwrap();
        assert_eq!(m, again);
    }
}
