//! Four-component spinors and the component form of the free Dirac
//! equation.
//!
//! Residual checkers take fields that supply their own first derivatives
//! (a "jet") at each sample point, so a residual measures only how far the
//! field is from solving the equation, never a discretisation error.

use serde::{Deserialize, Serialize};

use crate::clifford::pauli;
use crate::constants::PhysicalConstants;
use crate::error::{DiracError, Result};
use crate::C64;

/// Tolerance on `|ψ|² − 1` for a spinor to count as normalised.
pub const NORM_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Four complex components `(ψ_1, ψ_2, ψ_3, ψ_4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spinor4 {
    pub components: [C64; 4],
}

impl Spinor4 {
    pub fn new(components: [C64; 4]) -> Self {
        Spinor4 { components }
    }

    pub fn from_real(v: [f64; 4]) -> Self {
        Spinor4::new(v.map(|x| C64::new(x, 0.0)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(DiracError::domain(format!(
                "spinor is not normalised: |ψ|² = {}",
                self.norm_sqr()
            )))
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(DiracError::domain(
                "cannot normalise a zero or non-finite spinor",
            ));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Spinor4::new(self.components.map(|z| z * s))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = self.components;
        for (a, b) in c.iter_mut().zip(other.components) {
            *a += b;
        }
        Spinor4::new(c)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.components
    }

    /// Rephases so that the first component with modulus above `1e-14` is
    /// real and positive.
    pub fn with_canonical_phase(&self) -> Self {
        match self.components.iter().find(|z| z.norm() > 1e-14) {
            Some(z) => self.scale(z.conj() / z.norm()),
            None => *self,
        }
    }
}

/// Upper pair `φ = (ψ_1, ψ_2)` and lower pair `χ = (ψ_3, ψ_4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BispinorSplit {
    pub upper: [C64; 2],
    pub lower: [C64; 2],
}

impl BispinorSplit {
    pub fn recompose(&self) -> Spinor4 {
        Spinor4::new([self.upper[0], self.upper[1], self.lower[0], self.lower[1]])
    }
}

pub fn split_bispinor(psi: &Spinor4) -> BispinorSplit {
    let [a, b, c, d] = psi.components;
    BispinorSplit {
        upper: [a, b],
        lower: [c, d],
    }
}

/// A point `(x, y, z, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
}

impl SpacetimePoint {
    pub fn new(x: f64, y: f64, z: f64, t: f64) -> Self {
        SpacetimePoint { x, y, z, t }
    }
}

/// A point `(ρ, φ, z, t)` in cylindrical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylindricalPoint {
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
    pub t: f64,
}

impl CylindricalPoint {
    pub fn new(rho: f64, phi: f64, z: f64, t: f64) -> Self {
        CylindricalPoint { rho, phi, z, t }
    }

    pub fn to_cartesian(&self) -> SpacetimePoint {
        SpacetimePoint::new(
            self.rho * self.phi.cos(),
            self.rho * self.phi.sin(),
            self.z,
            self.t,
        )
    }
}

/// Values and first partial derivatives of the four components at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorJet {
    pub value: [C64; 4],
    pub dt: [C64; 4],
    /// `[∂_x, ∂_y, ∂_z]`.
    pub grad: [[C64; 4]; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalJet {
    pub value: [C64; 4],
    pub dt: [C64; 4],
    pub drho: [C64; 4],
    pub dphi: [C64; 4],
    pub dz: [C64; 4],
}

/// A spinor field that can report its own first derivatives. `None` means
/// the derivative data is unavailable at that point.
pub trait SpinorField {
    fn jet(&self, p: &SpacetimePoint) -> Option<SpinorJet>;
}

pub trait CylindricalField {
    fn cylindrical_jet(&self, p: &CylindricalPoint) -> Option<CylindricalJet>;
}

/// `u · exp(i(p·r − ħω t)/ħ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    pub amplitude: Spinor4,
    pub momentum: [f64; 3],
    /// Angular frequency `ω = E/ħ`.
    pub omega: f64,
    pub hbar: f64,
}

impl PlaneWave {
    pub fn new(amplitude: Spinor4, momentum: [f64; 3], omega: f64, hbar: f64) -> Self {
        PlaneWave {
            amplitude,
            momentum,
            omega,
            hbar,
        }
    }

    fn phase(&self, p: &SpacetimePoint) -> C64 {
        let [px, py, pz] = self.momentum;
        let arg = (px * p.x + py * p.y + pz * p.z) / self.hbar - self.omega * p.t;
        C64::from_polar(1.0, arg)
    }

    pub fn value(&self, p: &SpacetimePoint) -> [C64; 4] {
        let ph = self.phase(p);
        self.amplitude.components.map(|u| u * ph)
    }
}

impl SpinorField for PlaneWave {
    fn jet(&self, p: &SpacetimePoint) -> Option<SpinorJet> {
        let value = self.value(p);
        let k = self.momentum.map(|pj| I * (pj / self.hbar));
        Some(SpinorJet {
            value,
            dt: value.map(|v| v * C64::new(0.0, -self.omega)),
            grad: k.map(|kj| value.map(|v| v * kj)),
        })
    }
}

impl CylindricalField for PlaneWave {
    fn cylindrical_jet(&self, p: &CylindricalPoint) -> Option<CylindricalJet> {
        let value = self.value(&p.to_cartesian());
        let [px, py, pz] = self.momentum;
        let (s, c) = p.phi.sin_cos();
        let k_rho = I * ((px * c + py * s) / self.hbar);
        let k_phi = I * (p.rho * (-px * s + py * c) / self.hbar);
        let k_z = I * (pz / self.hbar);
        Some(CylindricalJet {
            value,
            dt: value.map(|v| v * C64::new(0.0, -self.omega)),
            drho: value.map(|v| v * k_rho),
            dphi: value.map(|v| v * k_phi),
            dz: value.map(|v| v * k_z),
        })
    }
}

/// `(σ·p) v` for a two-component `v`.
fn sigma_dot(p: [f64; 3], v: [C64; 2]) -> [C64; 2] {
    let [px, py, pz] = p;
    [
        v[0] * pz + v[1] * C64::new(px, -py),
        v[0] * C64::new(px, py) - v[1] * pz,
    ]
}

/// Left minus right side of the coupled two-component equations
/// `iħ∂_tφ = C(σ·P)χ + mC²φ`, `iħ∂_tχ = C(σ·P)φ − mC²χ` for a plane wave,
/// evaluated at the origin where the phase factor is one.
pub fn coupled_residual(wave: &PlaneWave, k: &PhysicalConstants) -> ([C64; 2], [C64; 2]) {
    let split = split_bispinor(&wave.amplitude);
    let energy = k.hbar() * wave.omega;
    let mc2 = k.rest_energy();
    let sp_chi = sigma_dot(wave.momentum, split.lower);
    let sp_phi = sigma_dot(wave.momentum, split.upper);
    let upper = [0, 1].map(|i| split.upper[i] * energy - sp_chi[i] * k.c() - split.upper[i] * mc2);
    let lower = [0, 1].map(|i| split.lower[i] * energy - sp_phi[i] * k.c() + split.lower[i] * mc2);
    (upper, lower)
}

/// Residuals of the four scalar component equations at each sample point.
pub fn component_residual(
    field: &dyn SpinorField,
    points: &[SpacetimePoint],
    k: &PhysicalConstants,
) -> Result<Vec<[C64; 4]>> {
    points
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let jet = field.jet(p).ok_or_else(|| {
                DiracError::domain(format!("missing derivative data at sample {n}"))
            })?;
            Ok(cartesian_rows(&jet, k))
        })
        .collect()
}

fn cartesian_rows(j: &SpinorJet, k: &PhysicalConstants) -> [C64; 4] {
    let ih = I * k.hbar();
    let ihc = ih * k.c();
    let mc2 = k.rest_energy();
    let [dx, dy, dz] = j.grad;
    let psi = j.value;
    [
        ih * j.dt[0] + ihc * (dx[3] - I * dy[3] + dz[2]) - psi[0] * mc2,
        ih * j.dt[1] + ihc * (dx[2] + I * dy[2] - dz[3]) - psi[1] * mc2,
        ih * j.dt[2] + ihc * (dx[1] - I * dy[1] + dz[0]) + psi[2] * mc2,
        ih * j.dt[3] + ihc * (dx[0] + I * dy[0] - dz[1]) + psi[3] * mc2,
    ]
}

/// Residuals of the cylindrical-coordinate component equations.
///
/// The second row uses `−∂_zψ_4`, the sign that follows from the
/// Cartesian form under `x = ρ cos φ`, `y = ρ sin φ`.
pub fn cylindrical_residual(
    field: &dyn CylindricalField,
    points: &[CylindricalPoint],
    k: &PhysicalConstants,
) -> Result<Vec<[C64; 4]>> {
    cylindrical_residual_with_sign(field, points, k, -1.0)
}

/// Same as [`cylindrical_residual`] but with `+∂_zψ_4` in the second row,
/// as the cylindrical system is typeset. Kept so the discrepancy can be
/// demonstrated numerically.
pub fn cylindrical_residual_as_typeset(
    field: &dyn CylindricalField,
    points: &[CylindricalPoint],
    k: &PhysicalConstants,
) -> Result<Vec<[C64; 4]>> {
    cylindrical_residual_with_sign(field, points, k, 1.0)
}

fn cylindrical_residual_with_sign(
    field: &dyn CylindricalField,
    points: &[CylindricalPoint],
    k: &PhysicalConstants,
    row2_dz_sign: f64,
) -> Result<Vec<[C64; 4]>> {
    points
        .iter()
        .enumerate()
        .map(|(n, p)| {
            if !(p.rho > 0.0) {
                return Err(DiracError::domain(format!(
                    "sample {n} lies on the axis (ρ = {}); cylindrical form is singular there",
                    p.rho
                )));
            }
            let j = field.cylindrical_jet(p).ok_or_else(|| {
                DiracError::domain(format!("missing derivative data at sample {n}"))
            })?;
            let ih = I * k.hbar();
            let ihc = ih * k.c();
            let mc2 = k.rest_energy();
            let em = C64::from_polar(1.0, -p.phi);
            let ep = C64::from_polar(1.0, p.phi);
            let inv_rho = 1.0 / p.rho;
            let lowering = |c: usize| em * (j.drho[c] - I * inv_rho * j.dphi[c]);
            let raising = |c: usize| ep * (j.drho[c] + I * inv_rho * j.dphi[c]);
            let psi = j.value;
            Ok([
                ih * j.dt[0] + ihc * (lowering(3) + j.dz[2]) - psi[0] * mc2,
                ih * j.dt[1] + ihc * (raising(2) + j.dz[3] * row2_dz_sign) - psi[1] * mc2,
                ih * j.dt[2] + ihc * (lowering(1) + j.dz[0]) + psi[2] * mc2,
                ih * j.dt[3] + ihc * (raising(0) - j.dz[1]) + psi[3] * mc2,
            ])
        })
        .collect()
}

/// Largest component modulus over a list of residual rows.
pub fn max_residual(rows: &[[C64; 4]]) -> f64 {
    rows.iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Two-component coherent state `(cos(θ/2), e^{iφ} sin(θ/2))` pointing
/// along polar angles `(θ, φ)`.
pub fn spin_coherent_state(theta: f64, phi: f64) -> [C64; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [C64::new(c, 0.0), C64::from_polar(s, phi)]
}

/// The state orthogonal to [`spin_coherent_state`], pointing along the
/// antipodal direction.
pub fn spin_coherent_state_opposite(theta: f64, phi: f64) -> [C64; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [-C64::from_polar(s, -phi), C64::new(c, 0.0)]
}

/// `⟨σ⟩` in the coherent state along `(θ, φ)`, computed as the expectation
/// of each Pauli matrix.
pub fn spin_coherent_expectation(theta: f64, phi: f64) -> [f64; 3] {
    let chi = spin_coherent_state(theta, phi);
    [1, 2, 3].map(|j| pauli(j).expect("axis").expectation(&chi).re)
}

/// Which angular-momentum family a cylindrical spinor belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Angular indices `(l, l+1, l, l+1)`, `J_z = ħ(l + 1/2)`.
    #[serde(rename = "l+1/2")]
    Plus,
    /// Angular indices `(l−1, l, l−1, l)`, `J_z = ħ(l − 1/2)`.
    #[serde(rename = "l-1/2")]
    Minus,
}

impl Branch {
    pub fn angular_indices(self, l: i32) -> [i32; 4] {
        match self {
            Branch::Plus => [l, l + 1, l, l + 1],
            Branch::Minus => [l - 1, l, l - 1, l],
        }
    }

    /// `l ± 1/2`.
    pub fn half_integer(self, l: i32) -> f64 {
        match self {
            Branch::Plus => l as f64 + 0.5,
            Branch::Minus => l as f64 - 0.5,
        }
    }
}

/// Radial-axial profile `f(ρ, z)` of one component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Constant {
        amplitude: f64,
    },
    /// `a · ρⁿ · exp(−ρ²/w²) · exp(i k_z z)`.
    Gaussian {
        amplitude: f64,
        width: f64,
        rho_power: u32,
        kz: f64,
    },
}

impl Profile {
    pub fn value(&self, rho: f64, z: f64) -> C64 {
        self.value_and_derivatives(rho, z).0
    }

    /// `(f, ∂_ρ f, ∂_z f)`.
    pub fn value_and_derivatives(&self, rho: f64, z: f64) -> (C64, C64, C64) {
        match *self {
            Profile::Constant { amplitude } => (C64::new(amplitude, 0.0), ZERO, ZERO),
            Profile::Gaussian {
                amplitude,
                width,
                rho_power,
                kz,
            } => {
                let n = rho_power as i32;
                let g = (-(rho * rho) / (width * width)).exp();
                let axial = C64::from_polar(1.0, kz * z);
                let radial = amplitude * rho.powi(n) * g;
                let d_radial = amplitude
                    * g
                    * (if n > 0 {
                        n as f64 * rho.powi(n - 1)
                    } else {
                        0.0
                    } - 2.0 * rho.powi(n + 1) / (width * width));
                let f = axial * radial;
                (f, axial * d_radial, f * I * kz)
            }
        }
    }

    /// Samples on the tensor grid `rhos × zs`, `z` fastest.
    pub fn sample(&self, rhos: &[f64], zs: &[f64]) -> Vec<C64> {
        rhos.iter()
            .flat_map(|&r| zs.iter().map(move |&z| self.value(r, z)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylindricalComponent {
    pub l_k: i32,
    #[serde(rename = "profile_ref")]
    pub profile: Profile,
}

/// Four components `f_k(ρ, z) e^{i l_k φ}` with a common time factor
/// `e^{−iωt}` and overall normalisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylindricalSpinor {
    pub branch: Branch,
    pub l: i32,
    pub components: [CylindricalComponent; 4],
    #[serde(default = "unit_normalization")]
    pub normalization: f64,
    #[serde(default)]
    pub omega: f64,
}

fn unit_normalization() -> f64 {
    1.0
}

impl CylindricalSpinor {
    /// Builds a member of the `branch` family with the angular indices that
    /// family prescribes.
    pub fn new(branch: Branch, l: i32, profiles: [Profile; 4]) -> Self {
        let idx = branch.angular_indices(l);
        let mut i = 0;
        let components = profiles.map(|profile| {
            let c = CylindricalComponent {
                l_k: idx[i],
                profile,
            };
            i += 1;
            c
        });
        CylindricalSpinor {
            branch,
            l,
            components,
            normalization: 1.0,
            omega: 0.0,
        }
    }

    pub fn angular_indices(&self) -> [i32; 4] {
        self.components.map(|c| c.l_k)
    }

    pub fn has_branch_pattern(&self) -> bool {
        self.angular_indices() == self.branch.angular_indices(self.l)
    }
}

impl CylindricalField for CylindricalSpinor {
    fn cylindrical_jet(&self, p: &CylindricalPoint) -> Option<CylindricalJet> {
        let time = C64::from_polar(self.normalization, -self.omega * p.t);
        let mut jet = CylindricalJet {
            value: [ZERO; 4],
            dt: [ZERO; 4],
            drho: [ZERO; 4],
            dphi: [ZERO; 4],
            dz: [ZERO; 4],
        };
        for (k, comp) in self.components.iter().enumerate() {
            let (f, dr, dz) = comp.profile.value_and_derivatives(p.rho, p.z);
            let ang = C64::from_polar(1.0, comp.l_k as f64 * p.phi) * time;
            jet.value[k] = f * ang;
            jet.dt[k] = jet.value[k] * C64::new(0.0, -self.omega);
            jet.drho[k] = dr * ang;
            jet.dphi[k] = jet.value[k] * I * comp.l_k as f64;
            jet.dz[k] = dz * ang;
        }
        Some(jet)
    }
}

/// Outcome of applying `J_z = −iħ∂_φ + (ħ/2)Σ_z` to a cylindrical spinor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JzResult {
    pub is_eigenstate: bool,
    /// Common eigenvalue in units of action, when there is one.
    pub eigenvalue: Option<f64>,
    /// The factor `J_z` multiplies each component by.
    pub per_component: [f64; 4],
    /// Whether the angular indices follow the declared branch.
    pub branch_consistent: bool,
}

/// Applies `J_z` component by component. `−iħ∂_φ` acts on `e^{i l_k φ}` as
/// `ħ l_k`, and `Σ_z = diag(σ_z, σ_z)` contributes `±ħ/2` with signs
/// `(+, −, +, −)`.
pub fn jz_apply(cyl: &CylindricalSpinor, k: &PhysicalConstants) -> JzResult {
    const SIGMA_Z: [f64; 4] = [0.5, -0.5, 0.5, -0.5];
    let per_component =
        std::array::from_fn(|i| k.hbar() * (cyl.components[i].l_k as f64 + SIGMA_Z[i]));
    let first = per_component[0];
    let is_eigenstate = per_component.iter().all(|&v| v == first);
    JzResult {
        is_eigenstate,
        eigenvalue: is_eigenstate.then_some(first),
        per_component,
        branch_consistent: cyl.has_branch_pattern(),
    }
}
