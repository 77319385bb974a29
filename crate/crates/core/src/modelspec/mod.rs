//! Model descriptions: declared coordinates, a Lagrangian, optional gauge
//! generators, and analysis options.

mod builtin;
mod format;

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

pub use builtin::{builtin_model, BuiltinInfo, BUILTINS};
pub use format::{parse_in_model, parse_model, render_model};

use crate::symexpr::{Expression, VarRef, DEFAULT_JET_CAP};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unknown symbol `{name}`")]
    UnknownSymbol { name: String, line: usize, column: usize },
    #[error("{line}:{column}: index out of range for `{name}`")]
    IndexOutOfRange { name: String, line: usize, column: usize },
    #[error("line {line}: lagrangian is not polynomial in declared coordinates and velocities: {message}")]
    NonPolynomialLagrangian { line: usize, message: String },
    #[error("duplicate coordinate `{0}`")]
    DuplicateCoordinate(String),
    #[error("line {line}: malformed generator: {message}")]
    MalformedGenerator { line: usize, message: String },
    #[error("unknown builtin model `{0}`")]
    UnknownBuiltin(String),
    #[error("bad parameter `{name}`: {message}")]
    BadParameter { name: String, message: String },
}

impl ModelError {
    /// `(line, column)` for diagnostics, when the error points into a file.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            ModelError::Parse { line, column, .. }
            | ModelError::UnknownSymbol { line, column, .. }
            | ModelError::IndexOutOfRange { line, column, .. } => Some((*line, *column)),
            ModelError::NonPolynomialLagrangian { line, .. } | ModelError::MalformedGenerator { line, .. }
                if *line > 0 =>
            {
                Some((*line, 1))
            }
            _ => None,
        }
    }
}

/// A family of coordinates sharing a base name, e.g. `A[1..3, 0..1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateDecl {
    pub base: String,
    pub index_ranges: Vec<RangeInclusive<u32>>,
    /// Marks multiplier-like coordinates such as `A_0`. Advisory only; the
    /// Legendre stage decides what is actually discardable.
    pub discardable_hint: Option<bool>,
}

impl CoordinateDecl {
    pub fn scalar(base: &str) -> Self {
        CoordinateDecl { base: base.to_string(), index_ranges: Vec::new(), discardable_hint: None }
    }

    pub fn indexed(base: &str, ranges: &[RangeInclusive<u32>]) -> Self {
        CoordinateDecl { base: base.to_string(), index_ranges: ranges.to_vec(), discardable_hint: None }
    }

    pub fn discardable(mut self) -> Self {
        self.discardable_hint = Some(true);
        self
    }

    /// All coordinates, index tuples in lexicographic order.
    pub fn expand(&self) -> Vec<VarRef> {
        let mut tuples: Vec<Vec<u32>> = vec![Vec::new()];
        for r in &self.index_ranges {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    r.clone().map(move |i| {
                        let mut u = t.clone();
                        u.push(i);
                        u
                    })
                })
                .collect();
        }
        tuples.into_iter().map(|t| VarRef::coordinate(&self.base, &t)).collect()
    }

    pub fn contains(&self, indices: &[u32]) -> bool {
        indices.len() == self.index_ranges.len() && indices.iter().zip(&self.index_ranges).all(|(i, r)| r.contains(i))
    }
}

/// One term of a gauge generator: the gauge parameter's `k`-th time
/// derivative enters the variation of `coordinate` with `coefficient`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorComponent {
    pub coordinate: VarRef,
    pub k: u32,
    pub coefficient: Expression,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeGenerator {
    pub parameter_name: String,
    pub components: Vec<GeneratorComponent>,
}

impl GaugeGenerator {
    pub fn new(parameter_name: impl Into<String>) -> Self {
        GaugeGenerator { parameter_name: parameter_name.into(), components: Vec::new() }
    }

    pub fn with(mut self, coordinate: VarRef, k: u32, coefficient: Expression) -> Self {
        self.components.push(GeneratorComponent { coordinate, k, coefficient });
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelOptions {
    pub max_generations: u32,
    pub sample_count: usize,
    pub numeric_tolerance: f64,
    pub seed: u64,
    pub jet_cap: u32,
    /// Reject Lagrangians of degree > 2 in the velocities at the Legendre stage.
    pub quadratic_velocity: bool,
}

pub const DEFAULT_SEED: u64 = 0x5eed_2007;

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions {
            max_generations: 10,
            sample_count: 8,
            numeric_tolerance: 1e-9,
            seed: DEFAULT_SEED,
            jet_cap: DEFAULT_JET_CAP,
            quadratic_velocity: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    pub coordinates: Vec<CoordinateDecl>,
    pub lagrangian: Expression,
    pub generators: Vec<GaugeGenerator>,
    pub options: ModelOptions,
}

impl ModelSpec {
    /// Validates and assembles a model.
    pub fn new(
        name: impl Into<String>,
        coordinates: Vec<CoordinateDecl>,
        lagrangian: Expression,
        generators: Vec<GaugeGenerator>,
        options: ModelOptions,
    ) -> Result<Self, ModelError> {
        let m = ModelSpec { name: name.into(), coordinates, lagrangian, generators, options };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), ModelError> {
        let mut seen = BTreeSet::new();
        for d in &self.coordinates {
            if d.index_ranges.iter().any(|r| r.is_empty()) {
                return Err(ModelError::BadParameter {
                    name: d.base.clone(),
                    message: "empty index range".into(),
                });
            }
            for v in d.expand() {
                if !seen.insert(v.clone()) {
                    return Err(ModelError::DuplicateCoordinate(v.to_string()));
                }
            }
        }
        for v in self.lagrangian.vars() {
            let ok = v.is_configuration() && v.jet_order() <= 1 && seen.contains(&v.coordinate_of());
            if !ok {
                return Err(ModelError::NonPolynomialLagrangian {
                    line: 0,
                    message: format!("`{v}` is not a declared coordinate or velocity"),
                });
            }
        }
        if self.lagrangian.denominator().mentions(|v| !v.is_coordinate()) {
            return Err(ModelError::NonPolynomialLagrangian { line: 0, message: "velocity in a denominator".into() });
        }
        for g in &self.generators {
            let mut keys = BTreeSet::new();
            for c in &g.components {
                if !c.coordinate.is_coordinate() || !seen.contains(&c.coordinate) {
                    return Err(ModelError::MalformedGenerator {
                        line: 0,
                        message: format!("`{}` is not a declared coordinate", c.coordinate),
                    });
                }
                if !keys.insert((c.coordinate.clone(), c.k)) {
                    return Err(ModelError::MalformedGenerator {
                        line: 0,
                        message: format!("repeated component ({}, k={}) in `{}`", c.coordinate, c.k, g.parameter_name),
                    });
                }
                if c.k > self.options.jet_cap {
                    return Err(ModelError::MalformedGenerator {
                        line: 0,
                        message: format!("k={} exceeds the jet-order cap {}", c.k, self.options.jet_cap),
                    });
                }
                if let Some(v) = c.coefficient.vars().into_iter().find(|v| !(v.is_coordinate() && seen.contains(v))) {
                    return Err(ModelError::MalformedGenerator {
                        line: 0,
                        message: format!("coefficient mentions `{v}`; only declared coordinates are allowed"),
                    });
                }
            }
        }
        Ok(())
    }

    /// All coordinates in declaration order.
    pub fn coordinate_list(&self) -> Vec<VarRef> {
        self.coordinates.iter().flat_map(CoordinateDecl::expand).collect()
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.iter().map(|d| d.expand().len()).sum()
    }

    /// Coordinates flagged with the discardable hint.
    pub fn hinted_discardable(&self) -> Vec<VarRef> {
        self.coordinates
            .iter()
            .filter(|d| d.discardable_hint == Some(true))
            .flat_map(CoordinateDecl::expand)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_order_is_lexicographic() {
        let d = CoordinateDecl::indexed("A", &[1..=2, 0..=1]);
        let names: Vec<String> = d.expand().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["A[1,0]", "A[1,1]", "A[2,0]", "A[2,1]"]);
        assert!(d.contains(&[2, 1]));
        assert!(!d.contains(&[3, 0]));
        assert!(!d.contains(&[1]));
    }

    #[test]
    fn duplicate_coordinates_rejected() {
        let r = ModelSpec::new(
            "dup",
            vec![CoordinateDecl::scalar("x"), CoordinateDecl::scalar("x")],
            Expression::zero(),
            vec![],
            ModelOptions::default(),
        );
        assert_eq!(r, Err(ModelError::DuplicateCoordinate("x".into())));
    }

    #[test]
    fn generator_components_must_be_distinct() {
        let x = VarRef::coordinate("x", &[]);
        let g = GaugeGenerator::new("e").with(x.clone(), 0, Expression::one()).with(x, 0, Expression::int(2));
        let r = ModelSpec::new(
            "g",
            vec![CoordinateDecl::scalar("x")],
            "x'^2".parse().unwrap(),
            vec![g],
            ModelOptions::default(),
        );
        assert!(matches!(r, Err(ModelError::MalformedGenerator { .. })));
    }
}
