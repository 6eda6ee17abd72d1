//! Matrix kinematic momenta and the self fields they imply.

use std::f64::consts::PI;

use serde::Serialize;

use crate::clifford::{alpha, beta, commutator, levi_civita, spin_matrix, Representation};
use crate::constants::PhysicalConstants;
use crate::dynamics::{hamiltonian, MomentumState};
use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::spinor::{spin_coherent_state, Spinor4};
use crate::C64;

/// Cyclic index triples `(j, l, k)`, 1-based.
pub const CYCLIC: [(usize, usize, usize); 3] = [(2, 3, 1), (3, 1, 2), (1, 2, 3)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KinematicMomenta {
    pub p0: ComplexMatrix,
    pub p: [ComplexMatrix; 3],
}

/// `p̌_o = mC·I`, `p̌_j = mC·α_j`.
pub fn kinematic_momenta(constants: &PhysicalConstants, rep: Representation) -> KinematicMomenta {
    let mc = constants.mass() * constants.c();
    KinematicMomenta {
        p0: ComplexMatrix::identity(4).scale_real(mc),
        p: [1, 2, 3].map(|j| alpha(j, rep).unwrap().scale_real(mc)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FieldProvenance {
    FromCommutators,
    FromMatrixMaxwell,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfFields {
    pub e: [ComplexMatrix; 3],
    pub h: [ComplexMatrix; 3],
    pub provenance: FieldProvenance,
}

impl SelfFields {
    /// Largest entrywise difference over all six operators.
    pub fn max_abs_diff(&self, other: &SelfFields) -> f64 {
        self.e
            .iter()
            .zip(&other.e)
            .chain(self.h.iter().zip(&other.h))
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn electric_is_exactly_zero(&self) -> bool {
        self.e.iter().all(ComplexMatrix::is_zero)
    }
}

/// `2m²C³/(eħ)`, the coefficient of `Σ_k` in the self magnetic intensity.
pub fn self_field_strength(k: &PhysicalConstants) -> f64 {
    2.0 * k.mass() * k.mass() * k.c().powi(3) / (k.charge() * k.hbar())
}

/// Reads the fields off the commutators of the kinematic momenta by
/// matching `[p_j, p_l] = iħ(e/C)ε_jlk H_k` and `[p_j, p_o] = iħ(e/C)E_j`.
pub fn self_fields_commutator(k: &PhysicalConstants, rep: Representation) -> SelfFields {
    let km = kinematic_momenta(k, rep);
    let unit = C64::new(0.0, k.hbar() * k.charge() / k.c()).inv();
    let mut h = [
        ComplexMatrix::zeros(4),
        ComplexMatrix::zeros(4),
        ComplexMatrix::zeros(4),
    ];
    for (j, l, kk) in CYCLIC {
        h[kk - 1] = commutator(&km.p[j - 1], &km.p[l - 1]).unwrap().scale(unit);
    }
    let e = [0, 1, 2].map(|j| commutator(&km.p[j], &km.p0).unwrap().scale(unit));
    SelfFields {
        e,
        h,
        provenance: FieldProvenance::FromCommutators,
    }
}

/// Curl and gradient analogues with `∇_k → i(mC/ħ)α_k`,
/// `(1/C)∂_t → (mC/ħ)I`, vector-potential operator `(mC²/−e)α_l` and
/// scalar-potential operator `(mC²/−e)I`. The curl is contracted as
/// `ε_jkl ∇_k A_l`.
pub fn self_fields_matrix_maxwell(k: &PhysicalConstants, rep: Representation) -> SelfFields {
    let (m, c, hbar, e) = (k.mass(), k.c(), k.hbar(), k.charge());
    let grad = |axis: usize| alpha(axis, rep).unwrap().scale(C64::new(0.0, m * c / hbar));
    let d_t = ComplexMatrix::identity(4).scale_real(m * c / hbar);
    let pot_scale = m * c * c / -e;
    let vec_pot = |axis: usize| alpha(axis, rep).unwrap().scale_real(pot_scale);
    let scal_pot = ComplexMatrix::identity(4).scale_real(pot_scale);

    let h = [1, 2, 3].map(|j| {
        let mut acc = ComplexMatrix::zeros(4);
        for kk in 1..=3 {
            for l in 1..=3 {
                let eps = levi_civita(j, kk, l);
                if eps != 0.0 {
                    acc = &acc + &(&grad(kk) * &vec_pot(l)).scale_real(eps);
                }
            }
        }
        acc
    });
    // E_j = −(1/C)∂_t A_j − ∇_j φ, with the time derivative realised as
    // i(mC/ħ)I so that both terms carry the same phase.
    let d_t_i = d_t.scale(C64::new(0.0, 1.0));
    let e_fields = [1, 2, 3].map(|j| &(&d_t_i * &vec_pot(j)) - &(&grad(j) * &scal_pot));
    SelfFields {
        e: e_fields,
        h,
        provenance: FieldProvenance::FromMatrixMaxwell,
    }
}

/// Closed-form electromagnetic potentials with analytic first derivatives.
pub trait PotentialField: Sync {
    fn vector_potential(&self, x: [f64; 3], t: f64) -> [f64; 3];
    fn scalar_potential(&self, x: [f64; 3], t: f64) -> f64;
    /// `jac[k][l] = ∂_k A_l`.
    fn vector_potential_jacobian(&self, x: [f64; 3], t: f64) -> [[f64; 3]; 3];
    fn vector_potential_dt(&self, x: [f64; 3], t: f64) -> [f64; 3];
    fn scalar_potential_gradient(&self, x: [f64; 3], t: f64) -> [f64; 3];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxwellFields {
    pub e: [f64; 3],
    pub h: [f64; 3],
}

/// `H = ∇ × A`, `E = −(1/C)∂_t A − ∇φ`.
pub fn classical_maxwell_reference(
    field: &dyn PotentialField,
    x: [f64; 3],
    t: f64,
    c: f64,
) -> MaxwellFields {
    let jac = field.vector_potential_jacobian(x, t);
    let dt = field.vector_potential_dt(x, t);
    let grad = field.scalar_potential_gradient(x, t);
    let mut h = [0.0; 3];
    for (j, hj) in h.iter_mut().enumerate() {
        for kk in 0..3 {
            for l in 0..3 {
                let eps = levi_civita(j + 1, kk + 1, l + 1);
                if eps != 0.0 {
                    *hj += eps * jac[kk][l];
                }
            }
        }
    }
    let e = [0, 1, 2].map(|j| -dt[j] / c - grad[j]);
    MaxwellFields { e, h }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfPotentials {
    /// Real parts of `(mC²/−e)⟨βα_j⟩`.
    pub a: [f64; 3],
    /// Imaginary parts of the same expectations.
    pub a_imag: [f64; 3],
    pub phi: f64,
    pub state: Spinor4,
}

/// `A_j = (mC²/−e)⟨βα_j⟩`, `φ = (mC²/−e)⟨β⟩`.
pub fn self_potentials(
    psi: &Spinor4,
    k: &PhysicalConstants,
    rep: Representation,
) -> Result<SelfPotentials> {
    psi.ensure_normalized()?;
    let scale = k.mass() * k.c() * k.c() / -k.charge();
    let b = beta(rep);
    let v = psi.as_slice();
    let mut a = [0.0; 3];
    let mut a_imag = [0.0; 3];
    for j in 0..3 {
        let z = (&b * &alpha(j + 1, rep)?).expectation(v) * scale;
        a[j] = z.re;
        a_imag[j] = z.im;
    }
    Ok(SelfPotentials {
        a,
        a_imag,
        phi: b.expectation(v).re * scale,
        state: *psi,
    })
}

/// `(−eħ/2mC)Σ_j`.
pub fn magnetic_moment_operator(axis: usize, k: &PhysicalConstants) -> Result<ComplexMatrix> {
    Ok(spin_matrix(axis)?.scale_real(-k.charge() * k.hbar() / (2.0 * k.mass() * k.c())))
}

/// `(ħ/2)Σ_j`.
pub fn spin_operator(axis: usize, k: &PhysicalConstants) -> Result<ComplexMatrix> {
    Ok(spin_matrix(axis)?.scale_real(0.5 * k.hbar()))
}

/// `μ_j / S_j`, the same for every axis; equals `−g·e/(2mC)` with `g = 2`.
pub fn gyromagnetic_ratio(k: &PhysicalConstants) -> f64 {
    let mu = magnetic_moment_operator(3, k).unwrap();
    let s = spin_operator(3, k).unwrap();
    (mu[(0, 0)] / s[(0, 0)]).re
}

/// `E₀ = −Σ_j ⟨μ_j⟩⟨Ȟ_j⟩` in the rest spinor whose upper pair is the spin
/// coherent state at `(θ, φ_s)`.
pub fn rest_energy(theta: f64, phi_s: f64, k: &PhysicalConstants) -> f64 {
    let chi = spin_coherent_state(theta, phi_s);
    let zero = C64::new(0.0, 0.0);
    let psi = [chi[0], chi[1], zero, zero];
    let fields = self_fields_commutator(k, Representation::PauliDirac);
    let mut e0 = 0.0;
    for j in 0..3 {
        let mu = magnetic_moment_operator(j + 1, k)
            .unwrap()
            .expectation(&psi)
            .re;
        let h = fields.h[j].expectation(&psi).re;
        e0 -= mu * h;
    }
    e0
}

/// `δμ/μ = e²/(2πħC)`.
pub fn anomalous_moment_ratio(k: &PhysicalConstants) -> f64 {
    k.alpha() / (2.0 * PI)
}

/// The three expressions for the energy expectation, with the ingredients
/// that separate them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfActionReduction {
    pub norm: f64,
    /// `Σ_j ⟨α_j⟩⟨βα_j⟩`.
    pub alpha_beta_alpha: C64,
    /// Potential form: `mC²⟨ψ|ψ⟩⟨β⟩ + mC² Σ_j⟨α_j⟩⟨βα_j⟩ + C⟨α·p⟩`.
    pub with_self_potentials: C64,
    /// `C⟨α·p⟩ + mC²⟨β⟩`.
    pub reduced: C64,
    /// `⟨ψ|H|ψ⟩`.
    pub hamiltonian: C64,
}

pub fn self_action_reduction(psi: &Spinor4, state: &MomentumState) -> Result<SelfActionReduction> {
    psi.ensure_normalized()?;
    let k = &state.constants;
    let rep = state.rep;
    let v = psi.as_slice();
    let mc2 = k.rest_energy();
    let c = k.c();
    let norm = psi.norm_sqr();
    let b = beta(rep);
    let beta_exp = b.expectation(v);
    let mut aba = C64::new(0.0, 0.0);
    let mut kinetic = C64::new(0.0, 0.0);
    for j in 0..3 {
        let a = alpha(j + 1, rep)?;
        aba += a.expectation(v) * (&b * &a).expectation(v);
        kinetic += a.expectation(v) * (c * state.p[j]);
    }
    let e = k.charge();
    // −e⟨ψ|ψ⟩(mC²/−e)⟨β⟩ + eC⟨α_j⟩(mC/e)⟨βα_j⟩ + C⟨α_j p_j⟩
    let with_self_potentials =
        beta_exp * (-e * norm * (mc2 / -e)) + aba * (e * c * (k.mass() * c / e)) + kinetic;
    let reduced = kinetic + beta_exp * mc2;
    Ok(SelfActionReduction {
        norm,
        alpha_beta_alpha: aba,
        with_self_potentials,
        reduced,
        hamiltonian: hamiltonian(state).expectation(v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{eigenspinor, EnergySign, SpinAxis, SpinLabel};

    fn unit() -> PhysicalConstants {
        PhysicalConstants::unit()
    }

    #[test]
    fn momenta_at_unit_constants() {
        let km = kinematic_momenta(&unit(), Representation::PauliDirac);
        assert_eq!(km.p0, ComplexMatrix::identity(4));
        for j in 0..3 {
            assert_eq!(km.p[j], alpha(j + 1, Representation::PauliDirac).unwrap());
            assert_eq!(km.p[j].trace(), C64::new(0.0, 0.0));
        }
        let k = PhysicalConstants::new(1.0, 3.0, 2.0, 1.0).unwrap();
        let km = kinematic_momenta(&k, Representation::Standard);
        let sq = &km.p[1] * &km.p[1];
        assert!(sq.max_abs_diff(&ComplexMatrix::identity(4).scale_real(36.0)) < 1e-13);
    }

    #[test]
    fn commutator_fields() {
        for rep in Representation::ALL {
            let f = self_fields_commutator(&unit(), rep);
            assert!(f.electric_is_exactly_zero());
            for kk in 0..3 {
                assert!(
                    f.h[kk].max_abs_diff(&spin_matrix(kk + 1).unwrap().scale_real(2.0)) < 1e-15
                );
                assert!(f.h[kk].is_hermitian(0.0));
            }
        }
        let heavy = PhysicalConstants::new(1.0, 1.0, 2.0, 1.0).unwrap();
        let f = self_fields_commutator(&heavy, Representation::PauliDirac);
        assert!(f.h[2].max_abs_diff(&spin_matrix(3).unwrap().scale_real(8.0)) < 1e-14);
    }

    #[test]
    fn both_routes_agree() {
        let k = PhysicalConstants::new(0.7, 2.3, 1.9, 0.4).unwrap();
        for rep in Representation::ALL {
            let a = self_fields_commutator(&k, rep);
            let b = self_fields_matrix_maxwell(&k, rep);
            assert!(b.electric_is_exactly_zero());
            let scale = self_field_strength(&k);
            assert!(a.max_abs_diff(&b) <= 1e-14 * scale);
        }
    }

    struct Symmetric(f64);

    impl PotentialField for Symmetric {
        fn vector_potential(&self, x: [f64; 3], _: f64) -> [f64; 3] {
            [-0.5 * self.0 * x[1], 0.5 * self.0 * x[0], 0.0]
        }
        fn scalar_potential(&self, _: [f64; 3], _: f64) -> f64 {
            0.0
        }
        fn vector_potential_jacobian(&self, _: [f64; 3], _: f64) -> [[f64; 3]; 3] {
            [
                [0.0, 0.5 * self.0, 0.0],
                [-0.5 * self.0, 0.0, 0.0],
                [0.0; 3],
            ]
        }
        fn vector_potential_dt(&self, _: [f64; 3], _: f64) -> [f64; 3] {
            [0.0; 3]
        }
        fn scalar_potential_gradient(&self, _: [f64; 3], _: f64) -> [f64; 3] {
            [0.0; 3]
        }
    }

    #[test]
    fn symmetric_gauge_curl() {
        let f = classical_maxwell_reference(&Symmetric(1.5), [0.3, -0.2, 0.9], 0.0, 1.0);
        assert_eq!(f.h, [0.0, 0.0, 1.5]);
        assert_eq!(f.e, [0.0; 3]);
    }

    #[test]
    fn rest_frame_potentials() {
        let k = PhysicalConstants::new(1.0, 2.0, 3.0, 0.5).unwrap();
        let up = Spinor4::from_real([1.0, 0.0, 0.0, 0.0]);
        let p = self_potentials(&up, &k, Representation::PauliDirac).unwrap();
        assert_eq!(p.phi, -24.0);
        assert_eq!(p.a, [0.0; 3]);
        let down = Spinor4::from_real([0.0, 0.0, 1.0, 0.0]);
        assert_eq!(
            self_potentials(&down, &k, Representation::PauliDirac)
                .unwrap()
                .phi,
            24.0
        );
        let bad = Spinor4::from_real([1.0, 1.0, 0.0, 0.0]);
        assert!(self_potentials(&bad, &k, Representation::PauliDirac).is_err());
    }

    #[test]
    fn boosted_potentials_are_real_zero() {
        let s = MomentumState::new([0.3, -1.1, 0.8], unit(), Representation::Standard).unwrap();
        let u = eigenspinor(&s, EnergySign::Negative, SpinLabel::Down, SpinAxis::Z);
        let p = self_potentials(&u, &unit(), Representation::Standard).unwrap();
        assert!(p.a.iter().all(|a| a.abs() < 1e-12));
    }

    #[test]
    fn rest_energy_and_ratios() {
        assert!((rest_energy(0.4, 2.2, &unit()) - 1.0).abs() < 1e-15);
        let cgs = PhysicalConstants::new(1.0546e-27, 3e10, 9.1e-28, 4.8e-10).unwrap();
        let e0 = rest_energy(1.3, -0.4, &cgs);
        let want = 9.1e-28 * 3e10 * 3e10;
        assert!(((e0 - want) / want).abs() < 1e-14);
        let k = PhysicalConstants::new(1.0, 2.0, 3.0, 0.5).unwrap();
        assert!((gyromagnetic_ratio(&k) + 0.5 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn anomalous_ratio() {
        let r = anomalous_moment_ratio(&PhysicalConstants::natural());
        assert!((r - 1.161_409_73e-3).abs() < 1e-9);
        let k = PhysicalConstants::new(1.0, 1.0, 1.0, (2.0 * PI).sqrt()).unwrap();
        assert!((anomalous_moment_ratio(&k) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reduction_on_eigenspinor() {
        let s = MomentumState::new([1.0, 2.0, 3.0], unit(), Representation::PauliDirac).unwrap();
        let u = eigenspinor(&s, EnergySign::Positive, SpinLabel::Up, SpinAxis::Z);
        let r = self_action_reduction(&u, &s).unwrap();
        assert!(r.alpha_beta_alpha.norm() < 1e-12);
        assert!((r.hamiltonian.re - s.energy()).abs() < 1e-12);
        assert!((r.reduced - r.hamiltonian).norm() < 1e-12);
        assert!((r.with_self_potentials - r.hamiltonian).norm() < 1e-12);
    }
}
