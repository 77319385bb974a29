//! Exact symbolic kernel: rational functions over model symbols with
//! differentiation, substitution, time derivatives and an infix text form.

mod expr;
pub mod gcd;
mod parse;
pub mod poly;
mod render;
mod var;

pub use expr::{Expression, DEFAULT_JET_CAP};
pub(crate) use parse::parse_at;
pub use parse::{parse_expression, parse_expression_with, Resolve, ResolveError};
pub use poly::{rat, ratio, Monomial, Poly, Rational};
pub use var::{VarKind, VarRef};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymError {
    #[error("momentum or multiplier {0} cannot be differentiated in time")]
    MomentumInTimeDerivative(VarRef),
    #[error("denominator may only mention coordinates: {0}")]
    DenominatorViolation(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("time derivative of {var} exceeds the jet-order cap {cap}")]
    JetOrderExceeded { var: VarRef, cap: u32 },
    #[error("no value assigned to {0}")]
    UnassignedVariable(VarRef),
    #[error("{0} assigned twice")]
    DuplicateAssignment(VarRef),
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unknown symbol `{name}`")]
    UnknownSymbol { name: String, line: usize, column: usize },
    #[error("{line}:{column}: index out of range for `{name}`")]
    IndexOutOfRange { name: String, line: usize, column: usize },
}
