//! Minimal coupling on a cubic grid.
//!
//! Sign convention: `e > 0` is the charge magnitude and
//!
//! ```text
//! p̂_j = −iħ D_j − (e/C) A_j,     p̂_o = (e/C) φ   (static fields)
//! ```
//!
//! so that `[p̂_j, p̂_l] = iħ(e/C) ε_jlk H_k` with `H = ∇ × A` and
//! `[p̂_j, p̂_o] = iħ(e/C) E_j` with `E = −∇φ`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::error::{DiracError, Result};
use crate::fields::{classical_maxwell_reference, PotentialField, CYCLIC};
use crate::C64;

/// Text of the sign convention, for report headers.
pub const SIGN_CONVENTION: &str =
    "e>0 is the charge magnitude; p_j = -i*hbar*D_j - (e/C)*A_j; p_o = (e/C)*phi (static); \
     [p_j,p_l] = i*hbar*(e/C)*eps_jlk*H_k with H = curl A; [p_j,p_o] = i*hbar*(e/C)*E_j with E = -grad phi";

/// Smallest accepted points-per-axis.
pub const MIN_POINTS: usize = 9;
/// Points nearer the boundary than this are excluded from comparisons.
pub const BOUNDARY_LAYERS: usize = 2;
/// Test-function magnitude below which a point is excluded.
pub const VANISHING: f64 = 1e-8;
/// Errors below this are reported as exact.
pub const EXACT_FLOOR: f64 = 1e-13;

/// Origin-centred cubic grid with `n` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid3 {
    n: usize,
    h: f64,
}

impl Grid3 {
    pub fn new(n: usize, h: f64) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(DiracError::domain(format!(
                "grid needs at least {MIN_POINTS} points per axis, got {n}"
            )));
        }
        if n.is_multiple_of(2) {
            return Err(DiracError::domain(format!(
                "points per axis must be odd, got {n}"
            )));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(DiracError::domain(format!(
                "spacing must be positive, got {h}"
            )));
        }
        Ok(Grid3 { n, h })
    }

    /// Grid covering `[−half_width, half_width]³` at spacing close to `h`.
    pub fn covering(half_width: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(DiracError::domain(format!(
                "spacing must be positive, got {h}"
            )));
        }
        let half = (half_width / h).round() as usize;
        Grid3::new(2 * half + 1, h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i: [usize; 3]) -> usize {
        (i[0] * self.n + i[1]) * self.n + i[2]
    }

    pub fn unindex(&self, flat: usize) -> [usize; 3] {
        [
            flat / (self.n * self.n),
            (flat / self.n) % self.n,
            flat % self.n,
        ]
    }

    pub fn position(&self, i: [usize; 3]) -> [f64; 3] {
        let c = (self.n / 2) as f64;
        i.map(|v| (v as f64 - c) * self.h)
    }

    fn is_inside(&self, i: [usize; 3], layers: usize) -> bool {
        i.iter().all(|&v| v >= layers && v + layers < self.n)
    }

    /// Flat indices at least [`BOUNDARY_LAYERS`] away from every face.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&f| self.is_inside(self.unindex(f), BOUNDARY_LAYERS))
            .collect()
    }

    pub fn sample<F: Fn([f64; 3]) -> C64 + Sync>(&self, f: F) -> Vec<C64> {
        (0..self.len())
            .into_par_iter()
            .map(|i| f(self.position(self.unindex(i))))
            .collect()
    }
}

/// Named field configurations with polynomial potentials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum FieldPreset {
    /// Symmetric gauge `A = ½ B × r`.
    UniformB {
        b: [f64; 3],
    },
    /// `φ = −E₀·r`.
    LinearPhi {
        e0: [f64; 3],
    },
    /// Constant `A`, zero `φ`.
    ConstantA {
        a: [f64; 3],
    },
    Zero,
}

impl FieldPreset {
    pub const NAMES: [&'static str; 4] = ["uniform_b", "linear_phi", "constant_a", "zero"];

    pub fn name(&self) -> &'static str {
        match self {
            FieldPreset::UniformB { .. } => "uniform_b",
            FieldPreset::LinearPhi { .. } => "linear_phi",
            FieldPreset::ConstantA { .. } => "constant_a",
            FieldPreset::Zero => "zero",
        }
    }

    /// Intensities stated by the preset's parameters.
    pub fn declared(&self) -> ([f64; 3], [f64; 3]) {
        match *self {
            FieldPreset::UniformB { b } => (b, [0.0; 3]),
            FieldPreset::LinearPhi { e0 } => ([0.0; 3], e0),
            FieldPreset::ConstantA { .. } | FieldPreset::Zero => ([0.0; 3], [0.0; 3]),
        }
    }
}

impl fmt::Display for FieldPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self {
            FieldPreset::UniformB { b } => Some(b),
            FieldPreset::LinearPhi { e0 } => Some(e0),
            FieldPreset::ConstantA { a } => Some(a),
            FieldPreset::Zero => None,
        };
        match v {
            Some(v) => write!(f, "{}:{},{},{}", self.name(), v[0], v[1], v[2]),
            None => f.write_str(self.name()),
        }
    }
}

/// Parses `name` or `name:x,y,z`. Bare `uniform_b` means `B = ẑ`, bare
/// `linear_phi` means `E₀ = x̂`, bare `constant_a` means `A = (1, 1, 1)`.
impl FromStr for FieldPreset {
    type Err = DiracError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p)),
            None => (s.trim(), None),
        };
        let vector = |default: [f64; 3]| -> Result<[f64; 3]> {
            let Some(p) = params else { return Ok(default) };
            let parts: Vec<&str> = p.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(DiracError::domain(format!(
                    "preset {name}: expected three comma-separated numbers, got '{p}'"
                )));
            }
            let mut v = [0.0; 3];
            for (slot, part) in v.iter_mut().zip(&parts) {
                *slot = part
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| {
                        DiracError::domain(format!("preset {name}: bad number '{part}'"))
                    })?;
            }
            Ok(v)
        };
        match name {
            "uniform_b" => Ok(FieldPreset::UniformB {
                b: vector([0.0, 0.0, 1.0])?,
            }),
            "linear_phi" => Ok(FieldPreset::LinearPhi {
                e0: vector([1.0, 0.0, 0.0])?,
            }),
            "constant_a" => Ok(FieldPreset::ConstantA {
                a: vector([1.0, 1.0, 1.0])?,
            }),
            "zero" if params.is_none() => Ok(FieldPreset::Zero),
            "zero" => Err(DiracError::domain("preset zero takes no parameters")),
            other => Err(DiracError::domain(format!(
                "unknown preset '{other}' (known: {})",
                FieldPreset::NAMES.join(", ")
            ))),
        }
    }
}

impl PotentialField for FieldPreset {
    fn vector_potential(&self, x: [f64; 3], _t: f64) -> [f64; 3] {
        match *self {
            FieldPreset::UniformB { b } => [
                0.5 * (b[1] * x[2] - b[2] * x[1]),
                0.5 * (b[2] * x[0] - b[0] * x[2]),
                0.5 * (b[0] * x[1] - b[1] * x[0]),
            ],
            FieldPreset::ConstantA { a } => a,
            _ => [0.0; 3],
        }
    }

    fn scalar_potential(&self, x: [f64; 3], _t: f64) -> f64 {
        match *self {
            FieldPreset::LinearPhi { e0 } => -(e0[0] * x[0] + e0[1] * x[1] + e0[2] * x[2]),
            _ => 0.0,
        }
    }

    fn vector_potential_jacobian(&self, _x: [f64; 3], _t: f64) -> [[f64; 3]; 3] {
        match *self {
            // jac[k][l] = ∂_k A_l
            FieldPreset::UniformB { b } => [
                [0.0, 0.5 * b[2], -0.5 * b[1]],
                [-0.5 * b[2], 0.0, 0.5 * b[0]],
                [0.5 * b[1], -0.5 * b[0], 0.0],
            ],
            _ => [[0.0; 3]; 3],
        }
    }

    fn vector_potential_dt(&self, _x: [f64; 3], _t: f64) -> [f64; 3] {
        [0.0; 3]
    }

    fn scalar_potential_gradient(&self, _x: [f64; 3], _t: f64) -> [f64; 3] {
        match *self {
            FieldPreset::LinearPhi { e0 } => [-e0[0], -e0[1], -e0[2]],
            _ => [0.0; 3],
        }
    }
}

/// A preset whose declared intensities have been checked against the curl
/// and gradient of its potentials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldConfig {
    pub preset: FieldPreset,
    pub b_expected: [f64; 3],
    pub e_expected: [f64; 3],
}

impl FieldConfig {
    /// Verifies the declared intensities at every point of `grid`.
    pub fn new(preset: FieldPreset, grid: &Grid3, constants: &PhysicalConstants) -> Result<Self> {
        let (b, e) = preset.declared();
        let scale = 1.0 + b.iter().chain(&e).map(|v| v.abs()).fold(0.0, f64::max);
        let worst = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let r = classical_maxwell_reference(
                    &preset,
                    grid.position(grid.unindex(i)),
                    0.0,
                    constants.c(),
                );
                (0..3)
                    .map(|j| (r.h[j] - b[j]).abs().max((r.e[j] - e[j]).abs()))
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        if worst > 1e-12 * scale {
            return Err(DiracError::domain(format!(
                "preset {preset}: declared intensities differ from curl/gradient by {worst:e}"
            )));
        }
        Ok(FieldConfig {
            preset,
            b_expected: b,
            e_expected: e,
        })
    }
}

/// `ψ = c·exp(k·x)` with complex `k`, so that derivatives are closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticTestFunction {
    pub amplitude: C64,
    pub k: [C64; 3],
}

impl AnalyticTestFunction {
    pub fn value(&self, x: [f64; 3]) -> C64 {
        let arg: C64 = (0..3).map(|j| self.k[j] * x[j]).sum();
        self.amplitude * arg.exp()
    }

    pub fn gradient(&self, x: [f64; 3]) -> [C64; 3] {
        let v = self.value(x);
        self.k.map(|kj| kj * v)
    }

    pub fn hessian(&self, x: [f64; 3]) -> [[C64; 3]; 3] {
        let v = self.value(x);
        let k = self.k;
        [0, 1, 2].map(|a| [0, 1, 2].map(|b| k[a] * k[b] * v))
    }

    pub fn sample(&self, grid: &Grid3) -> Vec<C64> {
        grid.sample(|x| self.value(x))
    }
}

/// A real decaying exponential, a pure phase and a mixed one.
pub fn default_test_functions() -> Vec<AnalyticTestFunction> {
    let c = |re: f64, im: f64| C64::new(re, im);
    vec![
        AnalyticTestFunction {
            amplitude: c(1.0, 0.0),
            k: [c(0.3, 0.0), c(0.2, 0.0), c(-0.1, 0.0)],
        },
        AnalyticTestFunction {
            amplitude: c(0.8, 0.6),
            k: [c(0.0, 0.5), c(0.0, -0.4), c(0.0, 0.3)],
        },
        AnalyticTestFunction {
            amplitude: c(1.2, -0.5),
            k: [c(0.2, 0.4), c(-0.3, 0.1), c(0.1, -0.5)],
        },
    ]
}

fn central_difference(grid: &Grid3, psi: &[C64], axis: usize, i: [usize; 3]) -> C64 {
    let mut up = i;
    let mut dn = i;
    up[axis] += 1;
    dn[axis] -= 1;
    (psi[grid.index(up)] - psi[grid.index(dn)]) / (2.0 * grid.h())
}

/// Applies `p̂_0 = (e/C)φ` (axis 0) or `p̂_j = −iħD_j − (e/C)A_j`
/// (axes 1–3). Points in the outermost layer have no central difference and
/// are returned as zero.
pub fn kinetic_momentum_apply(
    axis: usize,
    preset: &FieldPreset,
    grid: &Grid3,
    psi: &[C64],
    constants: &PhysicalConstants,
) -> Result<Vec<C64>> {
    if axis > 3 {
        return Err(DiracError::domain(format!(
            "momentum axis must be 0..=3, got {axis}"
        )));
    }
    if grid.n() < MIN_POINTS {
        return Err(DiracError::domain("grid too small"));
    }
    if psi.len() != grid.len() {
        return Err(DiracError::DimensionMismatch {
            left: psi.len(),
            right: grid.len(),
        });
    }
    let q = constants.charge() / constants.c();
    let hbar = constants.hbar();
    Ok((0..grid.len())
        .into_par_iter()
        .map(|f| {
            let i = grid.unindex(f);
            let x = grid.position(i);
            if axis == 0 {
                return psi[f] * (q * preset.scalar_potential(x, 0.0));
            }
            if !grid.is_inside(i, 1) {
                return C64::new(0.0, 0.0);
            }
            let d = central_difference(grid, psi, axis - 1, i);
            d * C64::new(0.0, -hbar) - psi[f] * (q * preset.vector_potential(x, 0.0)[axis - 1])
        })
        .collect())
}

/// `[p̂_a, p̂_b]ψ` on the grid; valid on points two layers in.
pub fn commutator_apply(
    a: usize,
    b: usize,
    preset: &FieldPreset,
    grid: &Grid3,
    psi: &[C64],
    constants: &PhysicalConstants,
) -> Result<Vec<C64>> {
    let pb = kinetic_momentum_apply(b, preset, grid, psi, constants)?;
    let pa = kinetic_momentum_apply(a, preset, grid, psi, constants)?;
    let ab = kinetic_momentum_apply(a, preset, grid, &pb, constants)?;
    let ba = kinetic_momentum_apply(b, preset, grid, &pa, constants)?;
    Ok(ab.iter().zip(&ba).map(|(x, y)| x - y).collect())
}

/// Field estimates at interior points, one set per test function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldEstimates {
    /// Flat indices of the interior points.
    pub points: Vec<usize>,
    /// `h[f][p]`: magnetic estimate from test function `f` at point `p`;
    /// `None` where the function nearly vanishes.
    pub h: Vec<Vec<Option<[C64; 3]>>>,
    pub e: Vec<Vec<Option<[C64; 3]>>>,
    /// `(function, flat index)` pairs excluded for vanishing `ψ`.
    pub excluded: Vec<(usize, usize)>,
}

impl FieldEstimates {
    /// Largest `|estimate − expected|` over all functions, points and
    /// components.
    pub fn max_error(&self, b: [f64; 3], e: [f64; 3]) -> f64 {
        let dev = |sets: &Vec<Vec<Option<[C64; 3]>>>, want: [f64; 3]| {
            sets.iter()
                .flatten()
                .flatten()
                .flat_map(|v| (0..3).map(move |j| (v[j] - want[j]).norm()))
                .fold(0.0, f64::max)
        };
        dev(&self.h, b).max(dev(&self.e, e))
    }

    /// Largest pairwise deviation between estimates from different test
    /// functions at the same point.
    pub fn max_spread(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for sets in [&self.h, &self.e] {
            for p in 0..self.points.len() {
                let vals: Vec<[C64; 3]> = sets.iter().filter_map(|s| s[p]).collect();
                for a in 0..vals.len() {
                    for b in (a + 1)..vals.len() {
                        for j in 0..3 {
                            worst = worst.max((vals[a][j] - vals[b][j]).norm());
                        }
                    }
                }
            }
        }
        worst
    }
}

/// Divides `[p̂_j, p̂_l]ψ` and `[p̂_j, p̂_o]ψ` by `iħ(e/C)ψ` at every interior
/// point to estimate `H_k` and `E_j`.
pub fn commutator_field_extract(
    config: &FieldConfig,
    grid: &Grid3,
    test_functions: &[AnalyticTestFunction],
    constants: &PhysicalConstants,
) -> Result<FieldEstimates> {
    if test_functions.len() < 3 {
        return Err(DiracError::domain(format!(
            "need at least 3 test functions, got {}",
            test_functions.len()
        )));
    }
    let points = grid.interior();
    let unit = C64::new(0.0, constants.hbar() * constants.charge() / constants.c());
    let mut h_sets = Vec::new();
    let mut e_sets = Vec::new();
    let mut excluded = Vec::new();
    for (fi, tf) in test_functions.iter().enumerate() {
        let psi = tf.sample(grid);
        let mut h_comm = Vec::with_capacity(3);
        for (j, l, _) in CYCLIC {
            h_comm.push(commutator_apply(
                j,
                l,
                &config.preset,
                grid,
                &psi,
                constants,
            )?);
        }
        let mut e_comm = Vec::with_capacity(3);
        for j in 1..=3 {
            e_comm.push(commutator_apply(
                j,
                0,
                &config.preset,
                grid,
                &psi,
                constants,
            )?);
        }
        let mut hs = Vec::with_capacity(points.len());
        let mut es = Vec::with_capacity(points.len());
        for &p in &points {
            if psi[p].norm() < VANISHING {
                excluded.push((fi, p));
                hs.push(None);
                es.push(None);
                continue;
            }
            let denom = unit * psi[p];
            hs.push(Some([0, 1, 2].map(|k| h_comm[k][p] / denom)));
            es.push(Some([0, 1, 2].map(|j| e_comm[j][p] / denom)));
        }
        h_sets.push(hs);
        e_sets.push(es);
    }
    Ok(FieldEstimates {
        points,
        h: h_sets,
        e: e_sets,
        excluded,
    })
}

/// `p̂_a` applied to a function given by its value, gradient and Hessian,
/// returning the value and gradient of the result. Axis 0 is `p̂_o`.
fn apply_analytic(
    a: usize,
    preset: &FieldPreset,
    x: [f64; 3],
    f: (C64, [C64; 3], [[C64; 3]; 3]),
    q: f64,
    hbar: f64,
) -> (C64, [C64; 3]) {
    let (v, g, hs) = f;
    let mih = C64::new(0.0, -hbar);
    if a == 0 {
        let phi = preset.scalar_potential(x, 0.0);
        let gphi = preset.scalar_potential_gradient(x, 0.0);
        let val = v * (q * phi);
        let grad = [0, 1, 2].map(|k| (g[k] * phi + v * gphi[k]) * q);
        return (val, grad);
    }
    let j = a - 1;
    let aj = preset.vector_potential(x, 0.0)[j];
    let jac = preset.vector_potential_jacobian(x, 0.0);
    let val = mih * g[j] - v * (q * aj);
    let grad = [0, 1, 2].map(|k| mih * hs[k][j] - (g[k] * aj + v * jac[k][j]) * q);
    (val, grad)
}

/// The same extraction with exact derivatives instead of differences, at a
/// single point.
pub fn analytic_field_extract(
    preset: &FieldPreset,
    tf: &AnalyticTestFunction,
    x: [f64; 3],
    constants: &PhysicalConstants,
) -> ([C64; 3], [C64; 3]) {
    let q = constants.charge() / constants.c();
    let hbar = constants.hbar();
    let v = tf.value(x);
    let g = tf.gradient(x);
    let hs = tf.hessian(x);
    // The outer operator needs only the value and gradient of p̂_inner ψ.
    let comm = |a: usize, b: usize| -> C64 {
        let apply_twice = |outer: usize, inner: usize| -> C64 {
            let (iv, ig) = apply_analytic(inner, preset, x, (v, g, hs), q, hbar);
            if outer == 0 {
                return iv * (q * preset.scalar_potential(x, 0.0));
            }
            let o = outer - 1;
            C64::new(0.0, -hbar) * ig[o] - iv * (q * preset.vector_potential(x, 0.0)[o])
        };
        apply_twice(a, b) - apply_twice(b, a)
    };
    let unit = C64::new(0.0, hbar * q) * v;
    let mut h = [C64::new(0.0, 0.0); 3];
    for (j, l, k) in CYCLIC {
        h[k - 1] = comm(j, l) / unit;
    }
    let e = [1, 2, 3].map(|j| comm(j, 0) / unit);
    (h, e)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum OrderEstimate {
    /// Every error is below [`EXACT_FLOOR`].
    Exact,
    Order(f64),
    /// Errors do not decrease monotonically.
    NoCleanOrder,
}

impl fmt::Display for OrderEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderEstimate::Exact => f.write_str("exact"),
            OrderEstimate::Order(p) => write!(f, "{p:.4}"),
            OrderEstimate::NoCleanOrder => f.write_str("no clean order"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub preset: FieldPreset,
    pub spacings: Vec<f64>,
    pub errors: Vec<f64>,
    pub order: OrderEstimate,
}

/// Half-width of the domain used by [`convergence_study`].
pub const STUDY_HALF_WIDTH: f64 = 1.0;

/// Runs the extraction on grids over `[−1, 1]³` at each spacing and fits
/// the slope of `log(error)` against `log(h)`.
pub fn convergence_study(
    preset: FieldPreset,
    spacings: &[f64],
    constants: &PhysicalConstants,
) -> Result<ConvergenceStudy> {
    if spacings.len() < 3 {
        return Err(DiracError::domain(format!(
            "convergence study needs at least 3 spacings, got {}",
            spacings.len()
        )));
    }
    for w in spacings.windows(2) {
        if !(w[0] > 0.0) || ((w[1] / w[0]) - 0.5).abs() > 1e-9 {
            return Err(DiracError::domain(format!(
                "each spacing must halve the previous one ({} -> {})",
                w[0], w[1]
            )));
        }
    }
    let tfs = default_test_functions();
    let mut errors = Vec::with_capacity(spacings.len());
    for &h in spacings {
        let grid = Grid3::covering(STUDY_HALF_WIDTH, h)?;
        let config = FieldConfig::new(preset, &grid, constants)?;
        let est = commutator_field_extract(&config, &grid, &tfs, constants)?;
        errors.push(est.max_error(config.b_expected, config.e_expected));
    }
    Ok(ConvergenceStudy {
        preset,
        spacings: spacings.to_vec(),
        order: estimate_order(spacings, &errors),
        errors,
    })
}

pub fn estimate_order(spacings: &[f64], errors: &[f64]) -> OrderEstimate {
    if errors.iter().all(|&e| e < EXACT_FLOOR) {
        return OrderEstimate::Exact;
    }
    if errors.windows(2).any(|w| !(w[1] < w[0])) || errors.iter().any(|&e| !(e > 0.0)) {
        return OrderEstimate::NoCleanOrder;
    }
    let xs: Vec<f64> = spacings.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    OrderEstimate::Order(crate::dynamics::linear_fit(&xs, &ys).slope)
}
