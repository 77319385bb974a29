//! Builtin fixture models.

use super::{CoordinateDecl, GaugeGenerator, ModelError, ModelOptions, ModelSpec};
use crate::symexpr::{ratio, Expression, VarRef};

pub struct BuiltinInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static str,
}

pub const BUILTINS: &[BuiltinInfo] = &[
    BuiltinInfo {
        name: "toy_gauge",
        summary: "L = (x' - y)^2/2; one gauge parameter (dx = e, dy = e')",
        params: "none",
    },
    BuiltinInfo { name: "oscillator", summary: "L = x'^2/2 - x^2/2; regular, no constraints", params: "none" },
    BuiltinInfo {
        name: "second_class_toy",
        summary: "L = x'*y - (x^2 + y^2)/2; two second-class constraints",
        params: "none",
    },
    BuiltinInfo {
        name: "maxwell_lattice",
        summary: "compact U(1) gauge field on an N^3 periodic lattice, temporal component A0 per site",
        params: "N=<int >= 1> (default 2)",
    },
    BuiltinInfo {
        name: "ym_mechanics",
        summary: "spatially homogeneous SU(2) Yang-Mills, optionally coupled to a complex scalar doublet",
        params: "group=su2 (default), with_scalar=<bool> (default true)",
    },
];

fn v(base: &str, idx: &[u32]) -> Expression {
    Expression::var(VarRef::coordinate(base, idx))
}

fn vdot(base: &str, idx: &[u32]) -> Expression {
    Expression::var(VarRef::jet(base, idx, 1))
}

fn half() -> Expression {
    Expression::constant(ratio(1, 2))
}

fn reject_params(name: &str, params: &[(String, String)]) -> Result<(), ModelError> {
    match params.first() {
        Some((k, _)) => Err(ModelError::BadParameter {
            name: k.clone(),
            message: format!("`{name}` takes no parameters"),
        }),
        None => Ok(()),
    }
}

/// Builds a builtin model by name.
pub fn builtin_model(name: &str, params: &[(String, String)]) -> Result<ModelSpec, ModelError> {
    match name {
        "toy_gauge" => {
            reject_params(name, params)?;
            toy_gauge()
        }
        "oscillator" => {
            reject_params(name, params)?;
            oscillator()
        }
        "second_class_toy" => {
            reject_params(name, params)?;
            second_class_toy()
        }
        "maxwell_lattice" => {
            let mut n = 2u32;
            for (k, val) in params {
                match k.as_str() {
                    "N" | "n" => {
                        n = val.parse().ok().filter(|&n: &u32| n >= 1).ok_or_else(|| ModelError::BadParameter {
                            name: k.clone(),
                            message: format!("lattice size must be an integer >= 1, got `{val}`"),
                        })?
                    }
                    _ => return Err(ModelError::BadParameter { name: k.clone(), message: "unknown parameter".into() }),
                }
            }
            maxwell_lattice(n)
        }
        "ym_mechanics" => {
            let mut with_scalar = true;
            for (k, val) in params {
                match k.as_str() {
                    "group" if val == "su2" => {}
                    "group" => {
                        return Err(ModelError::BadParameter {
                            name: k.clone(),
                            message: format!("only su2 is available, got `{val}`"),
                        })
                    }
                    "with_scalar" => {
                        with_scalar = val.parse().map_err(|_| ModelError::BadParameter {
                            name: k.clone(),
                            message: format!("expected true or false, got `{val}`"),
                        })?
                    }
                    _ => return Err(ModelError::BadParameter { name: k.clone(), message: "unknown parameter".into() }),
                }
            }
            ym_mechanics(with_scalar)
        }
        other => Err(ModelError::UnknownBuiltin(other.to_string())),
    }
}

fn toy_gauge() -> Result<ModelSpec, ModelError> {
    let l = (vdot("x", &[]) - v("y", &[])).pow(2) * half();
    let g = GaugeGenerator::new("eps")
        .with(VarRef::coordinate("x", &[]), 0, Expression::one())
        .with(VarRef::coordinate("y", &[]), 1, Expression::one());
    ModelSpec::new(
        "toy_gauge",
        vec![CoordinateDecl::scalar("x"), CoordinateDecl::scalar("y")],
        l,
        vec![g],
        ModelOptions::default(),
    )
}

fn oscillator() -> Result<ModelSpec, ModelError> {
    let l = (vdot("x", &[]).pow(2) - v("x", &[]).pow(2)) * half();
    ModelSpec::new("oscillator", vec![CoordinateDecl::scalar("x")], l, vec![], ModelOptions::default())
}

fn second_class_toy() -> Result<ModelSpec, ModelError> {
    let l = vdot("x", &[]) * v("y", &[]) - (v("x", &[]).pow(2) + v("y", &[]).pow(2)) * half();
    ModelSpec::new(
        "second_class_toy",
        vec![CoordinateDecl::scalar("x"), CoordinateDecl::scalar("y")],
        l,
        vec![],
        ModelOptions::default(),
    )
}

type Site = [u32; 3];

fn shift(n: Site, dir: usize, by: i64, size: u32) -> Site {
    let mut m = n;
    m[dir] = ((n[dir] as i64 + by).rem_euclid(size as i64)) as u32;
    m
}

fn sites(size: u32) -> Vec<Site> {
    let mut out = Vec::new();
    for a in 0..size {
        for b in 0..size {
            for c in 0..size {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Temporal component `A0[n1,n2,n3]` and links `A[i,n1,n2,n3]`, `i = 1..3`.
fn maxwell_lattice(size: u32) -> Result<ModelSpec, ModelError> {
    let a0 = |n: Site| v("A0", &n);
    let link = |i: usize, n: Site| v("A", &[i as u32, n[0], n[1], n[2]]);
    // forward difference of a site field in direction `dir` (0-based)
    let fwd = |f: &dyn Fn(Site) -> Expression, n: Site, dir: usize| f(shift(n, dir, 1, size)) - f(n);

    let mut l = Expression::zero();
    for n in sites(size) {
        for i in 0..3 {
            let e_i = vdot("A", &[i as u32 + 1, n[0], n[1], n[2]]) - fwd(&a0, n, i);
            l = l + e_i.pow(2) * half();
        }
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let f_ij = fwd(&|m| link(j + 1, m), n, i) - fwd(&|m| link(i + 1, m), n, j);
                l = l - f_ij.pow(2) * Expression::constant(ratio(1, 4));
            }
        }
    }

    let mut generators = Vec::new();
    for m in sites(size) {
        let mut g = GaugeGenerator::new(format!("eps[{},{},{}]", m[0], m[1], m[2]));
        g = g.with(VarRef::coordinate("A0", &m), 1, Expression::one());
        // dA_i(n) = eps(n + e_i) - eps(n): coefficient of eps(m) is
        // delta(n + e_i, m) - delta(n, m)
        for i in 0..3 {
            let behind = shift(m, i, -1, size);
            if behind == m {
                continue;
            }
            let idx = |n: Site| VarRef::coordinate("A", &[i as u32 + 1, n[0], n[1], n[2]]);
            g = g.with(idx(behind), 0, Expression::one());
            g = g.with(idx(m), 0, Expression::int(-1));
        }
        generators.push(g);
    }

    let r = 0..=size - 1;
    ModelSpec::new(
        format!("maxwell_lattice(N={size})"),
        vec![
            CoordinateDecl::indexed("A0", &[r.clone(), r.clone(), r.clone()]).discardable(),
            CoordinateDecl::indexed("A", &[1..=3, r.clone(), r.clone(), r]),
        ],
        l,
        generators,
        ModelOptions::default(),
    )
}

fn levi_civita(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

/// Complex value as a pair of real expressions.
#[derive(Clone)]
struct Cx {
    re: Expression,
    im: Expression,
}

impl Cx {
    fn zero() -> Self {
        Cx { re: Expression::zero(), im: Expression::zero() }
    }
    fn add(&self, o: &Cx) -> Cx {
        Cx { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Cx) -> Cx {
        Cx { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn scale(&self, k: &Expression) -> Cx {
        Cx { re: &self.re * k, im: &self.im * k }
    }
    /// Multiplication by `i`.
    fn times_i(&self) -> Cx {
        Cx { re: -&self.im, im: self.re.clone() }
    }
    fn norm_sq(&self) -> Expression {
        self.re.pow(2) + self.im.pow(2)
    }
}

/// `τ_a φ` with `τ_a = σ_a / 2` acting on a doublet.
fn tau(a: usize, phi: &[Cx; 2]) -> [Cx; 2] {
    let h = half();
    let [p1, p2] = phi;
    let out = match a {
        1 => [p2.clone(), p1.clone()],
        2 => [p2.times_i().scale(&Expression::int(-1)), p1.times_i()],
        3 => [p1.clone(), p2.scale(&Expression::int(-1))],
        _ => unreachable!(),
    };
    [out[0].scale(&h), out[1].scale(&h)]
}

/// Homogeneous SU(2) gauge mechanics: `A0[a]`, `A[a,i]` (colour `a`, direction
/// `i`), and a scalar doublet `phi[k,r]` with `r = 0, 1` the real and
/// imaginary parts of component `k`.
fn ym_mechanics(with_scalar: bool) -> Result<ModelSpec, ModelError> {
    let colors = [1usize, 2, 3];
    let a0 = |a: usize| v("A0", &[a as u32]);
    let ai = |a: usize, i: usize| v("A", &[a as u32, i as u32]);
    let eps = |a, b, c| Expression::int(levi_civita(a, b, c));

    let mut l = Expression::zero();
    // electric part: G_0i^a = A_i^a' + ε_abc A0^b A_i^c
    for a in colors {
        for i in 1..=3 {
            let mut g = vdot("A", &[a as u32, i as u32]);
            for b in colors {
                for c in colors {
                    if levi_civita(a, b, c) != 0 {
                        g = g + eps(a, b, c) * a0(b) * ai(c, i);
                    }
                }
            }
            l = l + g.pow(2) * half();
        }
    }
    // magnetic part: G_ij^a = ε_abc A_i^b A_j^c
    for a in colors {
        for i in 1..=3 {
            for j in 1..=3 {
                if i == j {
                    continue;
                }
                let mut g = Expression::zero();
                for b in colors {
                    for c in colors {
                        if levi_civita(a, b, c) != 0 {
                            g = g + eps(a, b, c) * ai(b, i) * ai(c, j);
                        }
                    }
                }
                l = l - g.pow(2) * Expression::constant(ratio(1, 4));
            }
        }
    }

    let phi_var = |k: u32, r: u32| VarRef::coordinate("phi", &[k, r]);
    let phi: [Cx; 2] = [1u32, 2].map(|k| Cx { re: v("phi", &[k, 0]), im: v("phi", &[k, 1]) });
    if with_scalar {
        let phidot: [Cx; 2] = [1u32, 2].map(|k| Cx { re: vdot("phi", &[k, 0]), im: vdot("phi", &[k, 1]) });
        // covariant derivative pieces: ∇_μ φ = ∂_μ φ - i τ_a A_μ^a φ
        let gauge_term = |field: &dyn Fn(usize) -> Expression| {
            let mut acc = [Cx::zero(), Cx::zero()];
            for a in colors {
                let t = tau(a, &phi);
                for k in 0..2 {
                    acc[k] = acc[k].add(&t[k].scale(&field(a)).times_i());
                }
            }
            acc
        };
        let d0 = {
            let g = gauge_term(&a0);
            [phidot[0].sub(&g[0]), phidot[1].sub(&g[1])]
        };
        l = l + d0[0].norm_sq() + d0[1].norm_sq();
        for i in 1..=3 {
            let g = gauge_term(&|a| ai(a, i));
            l = l - g[0].norm_sq() - g[1].norm_sq();
        }
        let rho = phi[0].norm_sq() + phi[1].norm_sq();
        l = l - rho.clone() - rho.pow(2) * half();
    }

    let mut generators = Vec::new();
    for a in colors {
        let mut g = GaugeGenerator::new(format!("eps[{a}]"));
        g = g.with(VarRef::coordinate("A0", &[a as u32]), 1, Expression::one());
        // adjoint action: δA_μ^b = ε_bca A_μ^c ε^a
        for b in colors {
            let mut c0 = Expression::zero();
            for c in colors {
                c0 = c0 + eps(b, c, a) * a0(c);
            }
            if !c0.is_zero() {
                g = g.with(VarRef::coordinate("A0", &[b as u32]), 0, c0);
            }
        }
        for b in colors {
            for i in 1..=3 {
                let mut ci = Expression::zero();
                for c in colors {
                    ci = ci + eps(b, c, a) * ai(c, i);
                }
                if !ci.is_zero() {
                    g = g.with(VarRef::coordinate("A", &[b as u32, i as u32]), 0, ci);
                }
            }
        }
        if with_scalar {
            // δφ = i τ_a φ
            let d = tau(a, &phi);
            for k in 0..2 {
                let dk = d[k].times_i();
                for (r, part) in [(0u32, dk.re), (1u32, dk.im)] {
                    if !part.is_zero() {
                        g = g.with(phi_var(k as u32 + 1, r), 0, part);
                    }
                }
            }
        }
        generators.push(g);
    }

    let mut coords = vec![
        CoordinateDecl::indexed("A0", &[1..=3]).discardable(),
        CoordinateDecl::indexed("A", &[1..=3, 1..=3]),
    ];
    if with_scalar {
        coords.push(CoordinateDecl::indexed("phi", &[1..=2, 0..=1]));
    }
    ModelSpec::new(
        format!("ym_mechanics(su2, with_scalar={with_scalar})"),
        coords,
        l,
        generators,
        ModelOptions::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_counts() {
        assert_eq!(builtin_model("toy_gauge", &[]).unwrap().dimension(), 2);
        let m1 = builtin_model("maxwell_lattice", &[("N".into(), "1".into())]).unwrap();
        assert_eq!(m1.dimension(), 4);
        let ym = builtin_model("ym_mechanics", &[("with_scalar".into(), "false".into())]).unwrap();
        assert_eq!(ym.dimension(), 12);
        assert_eq!(ym.generators.len(), 3);
        let yms = builtin_model("ym_mechanics", &[]).unwrap();
        assert_eq!(yms.dimension(), 16);
    }

    #[test]
    fn bad_names_and_params() {
        assert!(matches!(builtin_model("gravity", &[]), Err(ModelError::UnknownBuiltin(_))));
        assert!(matches!(
            builtin_model("maxwell_lattice", &[("N".into(), "0".into())]),
            Err(ModelError::BadParameter { .. })
        ));
        assert!(matches!(
            builtin_model("toy_gauge", &[("N".into(), "2".into())]),
            Err(ModelError::BadParameter { .. })
        ));
        assert!(matches!(
            builtin_model("ym_mechanics", &[("group".into(), "su3".into())]),
            Err(ModelError::BadParameter { .. })
        ));
    }

    #[test]
    fn toy_lagrangian_matches_file_form() {
        let m = builtin_model("toy_gauge", &[]).unwrap();
        assert_eq!(m.lagrangian, "(x' - y)^2/2".parse().unwrap());
    }

    #[test]
    fn lattice_generator_shape() {
        let m = builtin_model("maxwell_lattice", &[("N".into(), "2".into())]).unwrap();
        assert_eq!(m.generators.len(), 8);
        // A0 (k=1) plus two link terms per direction
        assert!(m.generators.iter().all(|g| g.components.len() == 7));
        let m1 = builtin_model("maxwell_lattice", &[("N".into(), "1".into())]).unwrap();
        assert_eq!(m1.generators[0].components.len(), 1);
    }
}
