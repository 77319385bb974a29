use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// What a symbol stands for in phase space or on the jet bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    Coordinate,
    Jet,
    Momentum,
    Multiplier,
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct VarData {
    base: Arc<str>,
    indices: Vec<u32>,
    kind: VarKind,
    jet_order: u32,
}

/// A model symbol: a coordinate, one of its time derivatives, its conjugate
/// momentum, or a Lagrange multiplier.
///
/// Cloning is a reference-count bump. Ordering is lexicographic over
/// `(base, indices, kind, jet_order)`.
#[derive(Clone)]
pub struct VarRef(Arc<VarData>);

impl VarRef {
    fn build(base: &str, indices: &[u32], kind: VarKind, jet_order: u32) -> Self {
        VarRef(Arc::new(VarData {
            base: Arc::from(base),
            indices: indices.to_vec(),
            kind,
            jet_order,
        }))
    }

    pub fn coordinate(base: &str, indices: &[u32]) -> Self {
        Self::build(base, indices, VarKind::Coordinate, 0)
    }

    /// The `order`-th time derivative of a coordinate; order 0 is the
    /// coordinate itself.
    pub fn jet(base: &str, indices: &[u32], order: u32) -> Self {
        if order == 0 {
            Self::coordinate(base, indices)
        } else {
            Self::build(base, indices, VarKind::Jet, order)
        }
    }

    pub fn momentum(base: &str, indices: &[u32]) -> Self {
        Self::build(base, indices, VarKind::Momentum, 0)
    }

    pub fn multiplier(base: &str, indices: &[u32]) -> Self {
        Self::build(base, indices, VarKind::Multiplier, 0)
    }

    pub fn base(&self) -> &str {
        &self.0.base
    }

    pub fn indices(&self) -> &[u32] {
        &self.0.indices
    }

    pub fn kind(&self) -> VarKind {
        self.0.kind
    }

    pub fn jet_order(&self) -> u32 {
        self.0.jet_order
    }

    /// True for a coordinate at jet order 0.
    pub fn is_coordinate(&self) -> bool {
        self.0.kind == VarKind::Coordinate
    }

    pub fn is_momentum(&self) -> bool {
        self.0.kind == VarKind::Momentum
    }

    pub fn is_multiplier(&self) -> bool {
        self.0.kind == VarKind::Multiplier
    }

    /// True for coordinates and their jets.
    pub fn is_configuration(&self) -> bool {
        matches!(self.0.kind, VarKind::Coordinate | VarKind::Jet)
    }

    /// Coordinate this symbol belongs to (jet order 0). Multipliers map to
    /// themselves.
    pub fn coordinate_of(&self) -> VarRef {
        match self.0.kind {
            VarKind::Coordinate | VarKind::Multiplier => self.clone(),
            VarKind::Jet | VarKind::Momentum => Self::coordinate(&self.0.base, &self.0.indices),
        }
    }

    /// Next jet order. Only meaningful for configuration symbols.
    pub fn time_successor(&self) -> VarRef {
        debug_assert!(self.is_configuration());
        Self::jet(&self.0.base, &self.0.indices, self.0.jet_order + 1)
    }

    /// Velocity of the underlying coordinate.
    pub fn velocity(&self) -> VarRef {
        Self::jet(&self.0.base, &self.0.indices, 1)
    }

    /// Momentum conjugate to the underlying coordinate.
    pub fn conjugate_momentum(&self) -> VarRef {
        Self::momentum(&self.0.base, &self.0.indices)
    }

    /// Same symbol kind with a different jet order.
    pub fn with_jet_order(&self, order: u32) -> VarRef {
        Self::jet(&self.0.base, &self.0.indices, order)
    }

    pub(crate) fn write_name(&self, f: &mut impl fmt::Write) -> fmt::Result {
        f.write_str(&self.0.base)?;
        if !self.0.indices.is_empty() {
            f.write_char('[')?;
            for (i, ix) in self.0.indices.iter().enumerate() {
                if i > 0 {
                    f.write_char(',')?;
                }
                write!(f, "{ix}")?;
            }
            f.write_char(']')?;
        }
        Ok(())
    }
}

impl PartialEq for VarRef {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarRef {}

impl PartialOrd for VarRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarRef {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.cmp(&other.0)
    }
}

impl std::hash::Hash for VarRef {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

/// Infix rendering: `x`, `A[1,2]`, `x'` (velocity), `x''`, `p(x)`, `mult(lambda[0])`.
impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.kind {
            VarKind::Coordinate => self.write_name(f),
            VarKind::Jet => {
                self.write_name(f)?;
                for _ in 0..self.0.jet_order {
                    f.write_str("'")?;
                }
                Ok(())
            }
            VarKind::Momentum => {
                f.write_str("p(")?;
                self.write_name(f)?;
                f.write_str(")")
            }
            VarKind::Multiplier => {
                f.write_str("mult(")?;
                self.write_name(f)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
