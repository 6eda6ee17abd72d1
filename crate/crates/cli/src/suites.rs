//! The checks run by `verify`, grouped by suite.
//!
//! Each suite gets its own generator seeded from the run seed plus the
//! suite index, so selecting a subset of suites never changes the values a
//! suite draws.

use std::f64::consts::PI;

use diraclab_core::check::{CheckRecord, CheckValue, ErrorMode};
use diraclab_core::clifford::{
    alpha, clifford_check, clifford_check_generators, commutator, dirac_generator, generators,
    pauli, sigma_completion_check, spin_matrix, standard_from_pauli_dirac, GeneratorKind,
    Representation,
};
use diraclab_core::dynamics::{
    alpha_evolved_oracle, degeneracy, eigenspinor, eta_matrix, fit_oscillation_template,
    hamiltonian, linear_fit, linspace, spectrum, velocity_operator, zbw_characteristics,
    zbw_closed_form, zbw_trajectory, EnergySign, MomentumState, SpinAxis, SpinLabel,
};
use diraclab_core::fields::{
    anomalous_moment_ratio, classical_maxwell_reference, gyromagnetic_ratio, kinematic_momenta,
    rest_energy, self_action_reduction, self_field_strength, self_fields_commutator,
    self_fields_matrix_maxwell, self_potentials,
};
use diraclab_core::lattice::{
    analytic_field_extract, commutator_apply, commutator_field_extract, convergence_study,
    default_test_functions, kinetic_momentum_apply, FieldConfig, FieldPreset, Grid3, OrderEstimate,
};
use diraclab_core::spinor::{
    component_residual, coupled_residual, cylindrical_residual, cylindrical_residual_as_typeset,
    jz_apply, max_residual, spin_coherent_expectation, spin_coherent_state, split_bispinor, Branch,
    CylindricalPoint, CylindricalSpinor, PlaneWave, Profile, SpacetimePoint, Spinor4,
};
use diraclab_core::{ComplexMatrix, PhysicalConstants, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{RunConfig, Suite};

/// Central-difference step for time derivatives.
pub const FD_STEP: f64 = 1e-5;
/// Bound for finite-difference comparisons.
pub const FD_TOL: f64 = 1e-8;
/// Bound for eigenstate trajectory linearity.
pub const LINEARITY_TOL: f64 = 1e-10;
/// Relative bound on a fitted oscillation frequency.
pub const FREQUENCY_TOL: f64 = 0.01;
/// Allowed deviation of a convergence order from 2.
pub const ORDER_TOL: f64 = 0.15;
/// Bound for the typeset-versus-Cartesian residual comparison.
pub const CYLINDRICAL_TOL: f64 = 1e-10;
/// Bound for Padé against spectral exponentials.
pub const EXP_TOL: f64 = 1e-11;
/// Lattice spacings used by the convergence checks.
pub const SPACINGS: [f64; 3] = [0.2, 0.1, 0.05];

/// An equation in the model that the suite deliberately does not check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Unchecked {
    pub label: String,
    pub suite: Suite,
    pub reason: String,
}

pub struct SuiteOutput {
    pub checks: Vec<CheckRecord>,
    pub unchecked: Vec<Unchecked>,
}

pub fn run(suite: Suite, cfg: &RunConfig) -> SuiteOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(suite.index()));
    match suite {
        Suite::Algebra => algebra(cfg, &mut rng),
        Suite::States => states(cfg, &mut rng),
        Suite::Dynamics => dynamics(cfg, &mut rng),
        Suite::Fields => fields(cfg, &mut rng),
        Suite::Lattice => lattice(cfg),
    }
}

fn random_momentum(rng: &mut ChaCha8Rng, r: f64) -> [f64; 3] {
    [0, 1, 2].map(|_| rng.random_range(-r..r))
}

fn random_rep(rng: &mut ChaCha8Rng) -> Representation {
    if rng.random_bool(0.5) {
        Representation::PauliDirac
    } else {
        Representation::Standard
    }
}

fn random_constants(rng: &mut ChaCha8Rng) -> PhysicalConstants {
    let mut d = || rng.random_range(0.2..5.0);
    PhysicalConstants::new(d(), d(), d(), d()).unwrap()
}

const STATES: [(EnergySign, SpinLabel); 4] = [
    (EnergySign::Positive, SpinLabel::Up),
    (EnergySign::Positive, SpinLabel::Down),
    (EnergySign::Negative, SpinLabel::Up),
    (EnergySign::Negative, SpinLabel::Down),
];

fn signed_energy(state: &MomentumState, sign: EnergySign) -> f64 {
    match sign {
        EnergySign::Positive => state.energy(),
        EnergySign::Negative => -state.energy(),
    }
}

fn algebra(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> SuiteOutput {
    let tol = cfg.tolerances.algebra;
    let mut out = Vec::new();
    let mut pd = generators(Representation::PauliDirac);
    if cfg.tamper_beta {
        pd[3][(0, 0)] = C64::new(-1.0, 0.0);
    }
    let pd_checks = clifford_check_generators(&pd, Representation::PauliDirac.label(), tol);
    out.extend(pd_checks.into_iter().map(|r| {
        if cfg.tamper_beta {
            r.note("negative control: β(0,0) negated")
        } else {
            r
        }
    }));
    out.extend(clifford_check(Representation::Standard, tol));
    for rep in Representation::ALL {
        out.extend(sigma_completion_check(rep, tol));
    }

    let s = standard_from_pauli_dirac();
    for kind in GeneratorKind::ALL {
        let got = &(&s * &dirac_generator(kind, Representation::PauliDirac)) * &s.adjoint();
        let want = dirac_generator(kind, Representation::Standard);
        let err = got.max_abs_diff(&want);
        out.push(
            CheckRecord::new(
                format!("algebra.intertwiner.{}", kind.label()),
                "b2",
                "S α_j S† = γ_j, S β S† = γ_o",
            )
            .claimed(want)
            .computed(got)
            .judge_abs(err, 1.0, tol)
            .note("S = (1/√2)|I I; I −I|"),
        );
    }

    let mut worst_exp: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    for _ in 0..20 {
        let entries: Vec<C64> = (0..16)
            .map(|_| C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
            .collect();
        let raw = ComplexMatrix::from_row_major(4, entries).unwrap();
        let h = (&raw + &raw.adjoint()).scale_real(0.5);
        let t = rng.random_range(-3.0..3.0);
        let pade = h.scale(C64::new(0.0, t)).exp();
        let spectral = h.exp_i_hermitian(t);
        worst_exp = match (pade, spectral) {
            (Ok(a), Ok(b)) => worst_exp.max(a.max_abs_diff(&b)),
            _ => f64::INFINITY,
        };
        let st =
            MomentumState::new(random_momentum(rng, 3.0), cfg.constants, random_rep(rng)).unwrap();
        let hm = hamiltonian(&st);
        worst_inv = match hm.inverse() {
            Ok(inv) => worst_inv.max((&inv * &hm).max_abs_diff(&ComplexMatrix::identity(4))),
            Err(_) => f64::INFINITY,
        };
    }
    out.push(
        CheckRecord::plumbing("algebra.exp.pade_vs_spectral")
            .claimed(0.0)
            .computed(worst_exp)
            .judge_abs(worst_exp, 1.0, EXP_TOL)
            .note("20 random Hermitian H, exp(itH) by Padé(13) vs eigendecomposition"),
    );
    out.push(
        CheckRecord::plumbing("algebra.inverse.round_trip")
            .claimed(0.0)
            .computed(worst_inv)
            .judge_abs(worst_inv, 1.0, 1e3 * tol)
            .note("max |H⁻¹H − I| over 20 random Hamiltonians"),
    );
    SuiteOutput {
        checks: out,
        unchecked: vec![],
    }
}

fn states(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> SuiteOutput {
    let k = cfg.constants;
    let tol = cfg.tolerances.dynamics;
    let mut out = Vec::new();
    let mut momenta = vec![[0.0; 3], [0.0, 0.0, 1.0], [0.6, -0.8, 0.5]];
    momenta.extend((0..3).map(|_| random_momentum(rng, 3.0)));
    let cart_points: Vec<SpacetimePoint> = (0..8)
        .map(|_| {
            SpacetimePoint::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(0.0..3.0),
            )
        })
        .collect();
    let cyl_points: Vec<CylindricalPoint> = (0..8)
        .map(|_| {
            CylindricalPoint::new(
                rng.random_range(0.1..2.0),
                rng.random_range(-PI..PI),
                rng.random_range(-2.0..2.0),
                rng.random_range(0.0..3.0),
            )
        })
        .collect();
    let matched: Vec<SpacetimePoint> = cyl_points
        .iter()
        .map(CylindricalPoint::to_cartesian)
        .collect();

    let mut typeset_worst: f64 = 0.0;
    let mut corrected_worst: f64 = 0.0;
    let mut typeset_scale: f64 = 1.0;
    for (n, &p) in momenta.iter().enumerate() {
        let st = MomentumState::new(p, k, Representation::PauliDirac).unwrap();
        let e = st.energy();
        let (mut coupled, mut comp, mut cyl_diff) = (0.0f64, 0.0f64, 0.0f64);
        for (sign, spin) in STATES {
            let u = eigenspinor(&st, sign, spin, SpinAxis::Z);
            let wave = PlaneWave::new(u, p, signed_energy(&st, sign) / k.hbar(), k.hbar());
            let (up, lo) = coupled_residual(&wave, &k);
            coupled = up
                .iter()
                .chain(&lo)
                .map(|z| z.norm())
                .fold(coupled, f64::max);
            comp = comp.max(max_residual(
                &component_residual(&wave, &cart_points, &k).unwrap(),
            ));
            let cyl = cylindrical_residual(&wave, &cyl_points, &k).unwrap();
            let cart = component_residual(&wave, &matched, &k).unwrap();
            for (a, b) in cyl.iter().zip(&cart) {
                for i in 0..4 {
                    cyl_diff = cyl_diff.max((a[i] - b[i]).norm());
                }
            }
            corrected_worst = corrected_worst.max(max_residual(&cyl) / e);
            if p[2] != 0.0 {
                let typeset = cylindrical_residual_as_typeset(&wave, &cyl_points, &k).unwrap();
                typeset_worst = typeset_worst.max(max_residual(&typeset) / e);
                typeset_scale = typeset_scale.max(e);
            }
        }
        out.push(
            CheckRecord::new(
                format!("states.ab1.p{n}"),
                "ab1",
                "iħ∂φ/∂t = C(σ·P)χ + mC²φ; iħ∂χ/∂t = C(σ·P)φ − mC²χ",
            )
            .claimed(0.0)
            .computed(coupled)
            .oracle(CheckValue::Vector(p.to_vec()))
            .judge_rel(coupled, e, tol)
            .note("max over the four eigenspinors of H(p); oracle field holds p"),
        );
        out.push(
            CheckRecord::new(
                format!("states.aa1.p{n}"),
                "aa1",
                "iħ∂ψ_1/∂t + iħC{∂ψ_4/∂x − i∂ψ_4/∂y + ∂ψ_3/∂z} = mC²ψ_1",
            )
            .claimed(0.0)
            .computed(comp)
            .judge_rel(comp, e, tol)
            .note("plane-wave eigenstates, 8 random spacetime points"),
        );
        out.push(
            CheckRecord::new(
                format!("states.aa2.p{n}"),
                "aa2",
                "exp(∓iφ){∂/∂ρ ∓ (i/ρ)∂/∂φ}",
            )
            .claimed(0.0)
            .computed(cyl_diff)
            .judge_rel(cyl_diff, e, CYLINDRICAL_TOL)
            .note("cylindrical residual minus Cartesian residual at matched points; row 2 uses −∂ψ_4/∂z"),
        );
    }
    let row2_ok = corrected_worst < CYLINDRICAL_TOL && typeset_worst > 1e-6;
    out.push(
        CheckRecord::new(
            "states.aa2.row2_sign",
            "aa2",
            "+ ∂ψ_4/∂z (row 2 as typeset)",
        )
        .claimed("typeset row 2 sign is inconsistent with the Cartesian form")
        .computed(typeset_worst)
        .oracle(corrected_worst)
        .judge_flag(row2_ok)
        .note(format!(
            "relative residual with +∂ψ_4/∂z is {typeset_worst:.3e} for p_z ≠ 0; with −∂ψ_4/∂z it is {corrected_worst:.3e}; \
             the corrected sign is used everywhere else (scale {typeset_scale:.3e})"
        )),
    );

    let profiles = [
        Profile::Gaussian {
            amplitude: 1.0,
            width: 1.2,
            rho_power: 1,
            kz: 0.3,
        },
        Profile::Gaussian {
            amplitude: 0.5,
            width: 0.8,
            rho_power: 2,
            kz: -0.1,
        },
        Profile::Constant { amplitude: 0.7 },
        Profile::Gaussian {
            amplitude: -0.4,
            width: 1.5,
            rho_power: 0,
            kz: 0.0,
        },
    ];
    for branch in [Branch::Plus, Branch::Minus] {
        let (eq, tag) = match branch {
            Branch::Plus => ("aa8", "plus"),
            Branch::Minus => ("aa9", "minus"),
        };
        for l in -5..=5 {
            let cyl = CylindricalSpinor::new(branch, l, profiles);
            let r = jz_apply(&cyl, &k);
            let want = k.hbar() * branch.half_integer(l);
            let got = r.eigenvalue.unwrap_or(f64::NAN);
            let err = if r.is_eigenstate {
                (got - want).abs()
            } else {
                f64::INFINITY
            };
            out.push(
                CheckRecord::new(
                    format!("states.jz.{tag}.l{l:+}"),
                    eq,
                    match branch {
                        Branch::Plus => "J_z Ψ_{l+1/2} = ħ(l+1/2) Ψ_{l+1/2}",
                        Branch::Minus => "J_z Ψ_{l−1/2} = ħ(l−1/2) Ψ_{l−1/2}",
                    },
                )
                .claimed(want)
                .computed(got)
                .judge_abs(err, want.abs(), tol * (1.0 + want.abs())),
            );
        }
    }
    let mut mixed = CylindricalSpinor::new(Branch::Plus, 2, profiles);
    mixed.components[1].l_k = 2;
    let r = jz_apply(&mixed, &k);
    out.push(
        CheckRecord::new("states.jz.mixed_branch", "aa7", "J_z = −iħ∂/∂φ + (ħ/2)σ_z")
            .claimed("not an eigenstate")
            .computed(if r.is_eigenstate {
                "eigenstate"
            } else {
                "not an eigenstate"
            })
            .judge_flag(!r.is_eigenstate)
            .note("angular indices (2, 2, 2, 3)"),
    );

    let mut coherent_err: f64 = 0.0;
    for _ in 0..100 {
        let theta = rng.random_range(0.0..PI);
        let phi = rng.random_range(-PI..PI);
        let chi = spin_coherent_state(theta, phi);
        let direct = [1, 2, 3].map(|j| pauli(j).unwrap().expectation(&chi).re);
        let closed = spin_coherent_expectation(theta, phi);
        let want = [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ];
        for j in 0..3 {
            coherent_err = coherent_err
                .max((direct[j] - want[j]).abs())
                .max((closed[j] - want[j]).abs());
        }
    }
    out.push(
        CheckRecord::plumbing("states.coherent.expectation")
            .claimed(0.0)
            .computed(coherent_err)
            .judge_abs(coherent_err, 1.0, 10.0 * cfg.tolerances.algebra)
            .note("⟨σ⟩ = (sinθcosφ, sinθsinφ, cosθ), 100 random angles"),
    );

    let psi = Spinor4::new(
        [0, 1, 2, 3].map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
    );
    let round = split_bispinor(&psi).recompose();
    out.push(
        CheckRecord::plumbing("states.split.round_trip")
            .claimed("identity")
            .computed(if round == psi { "identity" } else { "changed" })
            .judge_flag(round == psi),
    );

    SuiteOutput {
        checks: out,
        unchecked: vec![Unchecked {
            label: "ab2 as printed".into(),
            suite: Suite::States,
            reason:
                "the η/λ system has η on both sides of its first equation and φ in its second; \
                     no consistent reading is implied, so only the φ/χ system is checked"
                    .into(),
        }],
    }
}

fn dynamics(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> SuiteOutput {
    let k = cfg.constants;
    let tol = cfg.tolerances.dynamics;
    let mut out = Vec::new();

    let (mut abs_max, mut rel_max) = (0.0f64, 0.0f64);
    let mut degenerate_ok = true;
    for _ in 0..1000 {
        let p = random_momentum(rng, 5.0);
        let m = rng.random_range(0.1..5.0);
        let c = rng.random_range(0.1..5.0);
        let kk = PhysicalConstants::new(k.hbar(), c, m, k.charge()).unwrap();
        let st = MomentumState::new(p, kk, random_rep(rng)).unwrap();
        let p2: f64 = p.iter().map(|x| x * x).sum();
        let e = (c * c * p2 + m * m * c.powi(4)).sqrt();
        let spec = spectrum(&st).unwrap();
        for (g, w) in spec.iter().zip([-e, -e, e, e]) {
            abs_max = abs_max.max((g - w).abs());
            rel_max = rel_max.max((g - w).abs() / e);
        }
        degenerate_ok &= degeneracy(&spec, e, 1e-12) == (2, 2);
    }
    out.push(
        CheckRecord::new(
            "dynamics.spectrum.dispersion",
            "E^2 = P^2C^2 + m^2C^4",
            "E² = P²C² + m²C⁴",
        )
        .claimed("±√(C²p² + m²C⁴), each twice")
        .computed(rel_max)
        .judge_with(
            abs_max,
            if degenerate_ok {
                rel_max
            } else {
                f64::INFINITY
            },
            tol,
            ErrorMode::Relative,
        )
        .note("1000 random (p, m, C); eigenvalues by Hermitian eigensolve"),
    );

    let mut eig_worst: f64 = 0.0;
    for _ in 0..100 {
        let st = MomentumState::new(random_momentum(rng, 5.0), k, random_rep(rng)).unwrap();
        let h = hamiltonian(&st);
        let axis = SpinAxis {
            theta: rng.random_range(0.0..PI),
            phi: rng.random_range(-PI..PI),
        };
        for (sign, spin) in STATES {
            let u = eigenspinor(&st, sign, spin, axis);
            let ev = signed_energy(&st, sign);
            let hu = h.apply(u.as_slice());
            for (a, b) in hu.iter().zip(u.as_slice()) {
                eig_worst = eig_worst.max((a - b * ev).norm() / ev.abs());
            }
        }
    }
    out.push(
        CheckRecord::plumbing("dynamics.eigenspinor.residual")
            .claimed(0.0)
            .computed(eig_worst)
            .judge_with(eig_worst, eig_worst, tol, ErrorMode::Relative)
            .note("|Hu − Eu|/|E| over 100 random states × 4 eigenspinors"),
    );

    for rep in Representation::ALL {
        let mut worst: f64 = 0.0;
        for j in 1..=3 {
            let v = velocity_operator(j, &k, rep).unwrap();
            let ev = v.hermitian_eigenvalues().unwrap();
            for (g, w) in ev.iter().zip([-k.c(), -k.c(), k.c(), k.c()]) {
                worst = worst.max((g - w).abs());
            }
        }
        out.push(
            CheckRecord::new(
                format!("dynamics.velocity.{}", rep.label()),
                "d",
                "V_j = dr_j/dt = Cα_j",
            )
            .claimed("±C, each twice")
            .computed(worst)
            .judge_rel(worst, k.c(), tol),
        );
    }

    let (mut eta_worst, mut eom_worst, mut second_worst, mut third_gap) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let st = MomentumState::new(random_momentum(rng, 3.0), k, random_rep(rng)).unwrap();
        let h = hamiltonian(&st);
        let e = st.energy();
        let t = rng.random_range(0.0..5.0);
        for j in 1..=3 {
            let eta = eta_matrix(&st, j).unwrap();
            eta_worst = eta_worst.max((&(&eta * &h) + &(&h * &eta)).max_abs() / e);
            let fwd = alpha_evolved_oracle(&st, j, t + FD_STEP).unwrap();
            let bwd = alpha_evolved_oracle(&st, j, t - FD_STEP).unwrap();
            let lhs = (&fwd - &bwd).scale(C64::new(0.0, k.hbar() / (2.0 * FD_STEP)));
            let at = alpha_evolved_oracle(&st, j, t).unwrap();
            let rhs = commutator(&at, &h).unwrap();
            eom_worst = eom_worst.max(lhs.max_abs_diff(&rhs) / e);
            let a = alpha(j, st.rep).unwrap();
            let comm = commutator(&a, &h).unwrap();
            let cp = ComplexMatrix::identity(4).scale_real(k.c() * st.p[j - 1]);
            let second = (&(&a * &h) - &cp).scale_real(2.0);
            let third = (&cp - &(&a * &h)).scale_real(2.0);
            second_worst = second_worst.max(comm.max_abs_diff(&second) / e);
            third_gap = third_gap.max(comm.max_abs_diff(&third) / e);
        }
    }
    out.push(
        CheckRecord::new("dynamics.eta.anticommutes", "f", "η_j = α_j − Cp_j/H_d")
            .claimed(0.0)
            .computed(eta_worst)
            .judge_with(eta_worst * 1.0, eta_worst, tol, ErrorMode::Relative)
            .note("max |ηH + Hη|/E; the oscillating part is odd under H"),
    );
    out.push(
        CheckRecord::new(
            "dynamics.eom.heisenberg",
            "e",
            "iħ ∂α_j/∂t = α_jH_d − H_dα_j",
        )
        .claimed(0.0)
        .computed(eom_worst)
        .judge_with(eom_worst, eom_worst, FD_TOL, ErrorMode::Relative)
        .note("central difference of U†αU with step 1e-5 against the commutator, 20 random (p, t)"),
    );
    out.push(
        CheckRecord::new("dynamics.eom.second_form", "e", "= 2(α_jH_d − Cp_j)")
            .claimed(0.0)
            .computed(second_worst)
            .judge_with(second_worst, second_worst, tol, ErrorMode::Relative)
            .note(format!(
                "the further printed form 2(Cp_j − α_jH_d) is the negative of this one and misses [α_j, H] by up to {third_gap:.3e}·E"
            )),
    );

    let mut zbw_worst: f64 = 0.0;
    for _ in 0..20 {
        let st = MomentumState::new(random_momentum(rng, 3.0), k, random_rep(rng)).unwrap();
        let t = rng.random_range(0.0..5.0);
        let axis = rng.random_range(1..=3);
        let fwd = zbw_closed_form(&st, axis, t + FD_STEP).unwrap().total();
        let bwd = zbw_closed_form(&st, axis, t - FD_STEP).unwrap().total();
        let fd = (&fwd - &bwd).scale_real(0.5 / FD_STEP);
        let oracle = alpha_evolved_oracle(&st, axis, t)
            .unwrap()
            .scale_real(k.c());
        zbw_worst = zbw_worst.max(fd.max_abs_diff(&oracle) / k.c());
    }
    out.push(
        CheckRecord::new(
            "dynamics.zbw.velocity_vs_oracle",
            "g",
            "r_j = a_j + tC²p_j/H_d + (iCħ/H_d)(α_j − Cp_j/H_d)_{t=0} exp{2itH_d/ħ}",
        )
        .claimed(0.0)
        .computed(zbw_worst)
        .judge_with(zbw_worst * k.c(), zbw_worst, FD_TOL, ErrorMode::Relative)
        .note("d/dt of the closed form (step 1e-5) against C·U†αU at 20 random (p, t); closed form uses (iCħ/2)η H⁻¹(exp(−2iHt/ħ) − I)"),
    );

    let (mut lin_worst, mut slope_worst, mut zbw_abs) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10 {
        let st = MomentumState::new(random_momentum(rng, 3.0), k, random_rep(rng)).unwrap();
        let e = st.energy();
        let times = linspace(0.0, 20.0 * k.hbar() / e, 101);
        for (sign, spin) in STATES {
            let u = eigenspinor(&st, sign, spin, SpinAxis::Z);
            let traj = zbw_trajectory(&st, &u, &times).unwrap();
            let ev = signed_energy(&st, sign);
            for axis in 0..3 {
                let xs: Vec<f64> = traj.iter().map(|s| s.total[axis]).collect();
                let fit = linear_fit(&times, &xs);
                let group = k.c() * k.c() * st.p[axis] / ev;
                lin_worst = lin_worst.max(fit.max_residual);
                slope_worst = slope_worst.max((fit.slope - group).abs() / k.c());
                zbw_abs = traj
                    .iter()
                    .map(|s| s.zbw[axis].abs())
                    .fold(zbw_abs, f64::max);
            }
        }
    }
    let lin = lin_worst.max(slope_worst).max(zbw_abs);
    out.push(
        CheckRecord::new("dynamics.zbw.eigenstate_linear", "g", "tC²p_j/H_d")
            .claimed(0.0)
            .computed(lin)
            .judge_abs(lin, 1.0, LINEARITY_TOL)
            .note(format!(
                "10 random p × 4 eigenspinors: fit residual {lin_worst:.3e}, slope vs C²p/E {slope_worst:.3e}, max |zbw| {zbw_abs:.3e}"
            )),
    );

    for (n, p) in [[0.0; 3], [0.5, 0.0, 0.0], [0.3, -0.4, 1.2]]
        .iter()
        .enumerate()
    {
        let st = MomentumState::new(*p, k, Representation::PauliDirac).unwrap();
        match zbw_characteristics(&st) {
            Ok(ch) => {
                let err = (ch.fitted_frequency - ch.angular_frequency).abs();
                out.push(
                    CheckRecord::new(format!("dynamics.zbw.frequency.p{n}"), "g", "exp{2itH_d/ħ}")
                        .claimed(ch.angular_frequency)
                        .computed(ch.fitted_frequency)
                        .judge_rel(err, ch.angular_frequency, FREQUENCY_TOL)
                        .note(format!(
                            "claimed 2E/ħ; FFT peak refined by least squares over 10⁴ samples; amplitude {:.6e}",
                            ch.amplitude_scale
                        )),
                );
            }
            Err(e) => out.push(
                CheckRecord::new(format!("dynamics.zbw.frequency.p{n}"), "g", "exp{2itH_d/ħ}")
                    .computed(e.to_string())
                    .judge_flag(false),
            ),
        }
    }

    let st = MomentumState::new([0.4, 0.3, -0.6], k, Representation::PauliDirac).unwrap();
    let times = linspace(0.0, 3.0 * k.hbar() / st.energy(), 13);
    match fit_oscillation_template(&st, 1, &times) {
        Ok(fit) => {
            let scale = k.c() * k.hbar() / st.energy().powi(1);
            let ok =
                fit.max_residual <= 1e-10 * scale.max(1.0) && fit.rejected_residual > 1e-3 * scale;
            out.push(
                CheckRecord::new(
                    "dynamics.zbw.template_fit",
                    "g",
                    "(iCħ/H_d)(α_j − Cp_j/H_d)_{t=0} exp{2itH_d/ħ}",
                )
                .claimed("κ·Cħ·H⁻¹η(0)·exp(s·2iHt/ħ) reproduces the oscillating part")
                .computed(vec![fit.exponent_sign as f64, fit.prefactor.re, fit.prefactor.im])
                .oracle(fit.max_residual)
                .judge_flag(ok)
                .note(format!(
                    "computed = [s, Re κ, Im κ]; printed values are s = +1, κ = i; \
                     best fit s = {}, κ = {:.6}{:+.6}i with residual {:.3e}; the other sign leaves {:.3e}",
                    fit.exponent_sign, fit.prefactor.re, fit.prefactor.im, fit.max_residual, fit.rejected_residual
                )),
            );
        }
        Err(e) => out.push(
            CheckRecord::new("dynamics.zbw.template_fit", "g", "exp{2itH_d/ħ}")
                .computed(e.to_string())
                .judge_flag(false),
        ),
    }

    SuiteOutput {
        checks: out,
        unchecked: vec![Unchecked {
            label: "g printed constants".into(),
            suite: Suite::Dynamics,
            reason: "the printed prefactor iCħ/H_d and exponent sign +2itH_d/ħ do not fit the \
                     oracle; the fitted constants are reported in dynamics.zbw.template_fit"
                .into(),
        }],
    }
}

fn fields(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> SuiteOutput {
    let k = cfg.constants;
    let tol = cfg.tolerances.algebra;
    let dtol = cfg.tolerances.dynamics;
    let mut out = Vec::new();
    let strength = self_field_strength(&k);
    let (m, c, e) = (k.mass(), k.c(), k.charge());

    for rep in Representation::ALL {
        let km = kinematic_momenta(&k, rep);
        let want = ComplexMatrix::identity(4).scale_real((m * c).powi(2));
        let worst =
            km.p.iter()
                .map(|p| (p * p).max_abs_diff(&want))
                .fold(0.0, f64::max);
        let tr = km.p.iter().map(|p| p.trace().norm()).fold(0.0, f64::max);
        out.push(
            CheckRecord::new(
                format!("fields.momenta.{}", rep.label()),
                "m",
                "p̌_o = mCÎ; p̌_j = mCα_j",
            )
            .claimed(want)
            .computed(worst)
            .judge_rel(worst.max(tr), (m * c).powi(2), tol)
            .note("max |p̌_j² − m²C²I| and |tr p̌_j|"),
        );

        let comm = self_fields_commutator(&k, rep);
        let maxw = self_fields_matrix_maxwell(&k, rep);
        for (kk, (hc, hm)) in comm.h.iter().zip(&maxw.h).enumerate() {
            let want = spin_matrix(kk + 1).unwrap().scale_real(strength);
            let err = hc.max_abs_diff(&want);
            out.push(
                CheckRecord::new(
                    format!("fields.commutator.{}.h{}", rep.label(), kk + 1),
                    "o",
                    "Ȟ_j = 2(m²C³/(eħ))σ_j",
                )
                .claimed(want.clone())
                .computed(hc.clone())
                .judge_rel(err, strength, tol),
            );
            let err = hm.max_abs_diff(&want);
            out.push(
                CheckRecord::new(
                    format!("fields.maxwell.{}.h{}", rep.label(), kk + 1),
                    "u1",
                    "Ȟ_j = iε_jkl(mC/ħ)α(mC²/−e)α_l = 2(m²C³/(eħ))σ_j",
                )
                .claimed(want)
                .computed(hm.clone())
                .judge_rel(err, strength, tol)
                .note("contraction read as ε_jkl α_k α_l; potential operator (mC²/−e)α_l"),
            );
        }
        out.push(
            CheckRecord::new(
                format!("fields.commutator.{}.e_zero", rep.label()),
                "n2",
                "m²C²(α_jÎ − Îα_j) = 0",
            )
            .claimed(0.0)
            .computed(
                comm.e
                    .iter()
                    .map(ComplexMatrix::max_abs)
                    .fold(0.0, f64::max),
            )
            .judge_flag(comm.electric_is_exactly_zero())
            .note("exactly zero"),
        );
        out.push(
            CheckRecord::new(
                format!("fields.maxwell.{}.e_zero", rep.label()),
                "u2",
                "Ě_j = … = 0",
            )
            .claimed(0.0)
            .computed(
                maxw.e
                    .iter()
                    .map(ComplexMatrix::max_abs)
                    .fold(0.0, f64::max),
            )
            .judge_flag(maxw.electric_is_exactly_zero())
            .note("exactly zero"),
        );
    }

    let mut route_worst: f64 = 0.0;
    let mut all_zero = true;
    let mut alg_worst: f64 = 0.0;
    for _ in 0..100 {
        let kk = random_constants(rng);
        let rep = random_rep(rng);
        let a = self_fields_commutator(&kk, rep);
        let b = self_fields_matrix_maxwell(&kk, rep);
        let s = self_field_strength(&kk);
        route_worst = route_worst.max(a.max_abs_diff(&b) / s);
        all_zero &= a.electric_is_exactly_zero() && b.electric_is_exactly_zero();
        for j in 0..3 {
            let sq = &a.h[j] * &a.h[j];
            alg_worst = alg_worst
                .max(sq.max_abs_diff(&ComplexMatrix::identity(4).scale_real(s * s)) / (s * s));
            for l in (j + 1)..3 {
                alg_worst = alg_worst
                    .max((&(&a.h[j] * &a.h[l]) + &(&a.h[l] * &a.h[j])).max_abs() / (s * s));
            }
        }
    }
    out.push(
        CheckRecord::new("fields.routes_agree", "o", "Ȟ_j = 2(m²C³/(eħ))σ_j; Ě_j = 0")
            .claimed(0.0)
            .computed(route_worst)
            .judge_with(route_worst, if all_zero { route_worst } else { f64::INFINITY }, tol, ErrorMode::Relative)
            .note("commutator route vs matrix-Maxwell route over 100 random constants; E exactly zero in both"),
    );
    out.push(
        CheckRecord::plumbing("fields.h_algebra")
            .claimed(0.0)
            .computed(alg_worst)
            .judge_with(alg_worst, alg_worst, 10.0 * tol, ErrorMode::Relative)
            .note("H_k² = s²I and {H_j, H_l} = 0 (j ≠ l), relative to s²"),
    );

    let b = [0.0, 0.0, 1.7];
    let sym = FieldPreset::UniformB { b };
    let r = classical_maxwell_reference(&sym, [0.3, -0.5, 0.2], 0.0, c);
    let err = (0..3)
        .map(|j| (r.h[j] - b[j]).abs().max(r.e[j].abs()))
        .fold(0.0, f64::max);
    out.push(
        CheckRecord::new("fields.classical.symmetric_gauge", "t1", "H_j = [∇ × A]_j")
            .claimed(b)
            .computed(r.h)
            .judge_abs(err, 1.7, tol),
    );
    let e0 = [1.3, 0.0, 0.0];
    let lin = FieldPreset::LinearPhi { e0 };
    let r = classical_maxwell_reference(&lin, [0.3, -0.5, 0.2], 0.0, c);
    let err = (0..3)
        .map(|j| (r.e[j] - e0[j]).abs().max(r.h[j].abs()))
        .fold(0.0, f64::max);
    out.push(
        CheckRecord::new(
            "fields.classical.linear_phi",
            "t2",
            "E_j = −(1/C)∂A_j/∂t − ∇_jφ",
        )
        .claimed(e0)
        .computed(r.e)
        .judge_abs(err, 1.3, tol),
    );

    let rest = MomentumState::new([0.0; 3], k, Representation::PauliDirac).unwrap();
    let mc2_e = m * c * c / e;
    for (sign, tag, want_phi) in [
        (EnergySign::Positive, "rest_positive", -mc2_e),
        (EnergySign::Negative, "rest_negative", mc2_e),
    ] {
        let u = eigenspinor(&rest, sign, SpinLabel::Up, SpinAxis::Z);
        let pot = self_potentials(&u, &k, Representation::PauliDirac).unwrap();
        let err = (pot.phi - want_phi)
            .abs()
            .max(pot.a.iter().map(|a| a.abs()).fold(0.0, f64::max));
        out.push(
            CheckRecord::new(
                format!("fields.potentials.{tag}"),
                "s",
                "⟨φ̌⟩ = (mC²/−e)⟨Ψ*|β|Ψ⟩",
            )
            .claimed(want_phi)
            .computed(pot.phi)
            .judge_rel(err, mc2_e, tol),
        );
    }
    let (mut a_re, mut a_im) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let st = MomentumState::new(random_momentum(rng, 3.0), k, random_rep(rng)).unwrap();
        let (sign, spin) = STATES[rng.random_range(0..4)];
        let u = eigenspinor(&st, sign, spin, SpinAxis::Z);
        let pot = self_potentials(&u, &k, st.rep).unwrap();
        a_re = pot.a.iter().map(|v| v.abs()).fold(a_re, f64::max);
        a_im = pot.a_imag.iter().map(|v| v.abs()).fold(a_im, f64::max);
    }
    out.push(
        CheckRecord::new(
            "fields.potentials.vector_real_part",
            "s",
            "⟨Ǎ_j⟩ = (mC²/−e)⟨Ψ*|βα_j|Ψ⟩",
        )
        .claimed(0.0)
        .computed(a_re)
        .judge_rel(a_re, mc2_e, dtol)
        .note(format!(
            "βα_j is anti-Hermitian; largest imaginary part seen {a_im:.6e}"
        )),
    );

    let mut e0_worst: f64 = 0.0;
    let mut norm_worst: f64 = 0.0;
    for _ in 0..100 {
        let theta = rng.random_range(0.0..PI);
        let phi = rng.random_range(-PI..PI);
        e0_worst = e0_worst.max((rest_energy(theta, phi, &k) - k.rest_energy()).abs());
        let s = spin_coherent_expectation(theta, phi);
        norm_worst = norm_worst.max((s.iter().map(|x| x * x).sum::<f64>() - 1.0).abs());
    }
    out.push(
        CheckRecord::new("fields.rest_energy", "p", "E_o = −⟨μ_j⟩⟨Ȟ_j⟩ = mC²")
            .claimed(k.rest_energy())
            .computed(e0_worst)
            .judge_rel(e0_worst, k.rest_energy(), tol)
            .note("max deviation over 100 random spin directions"),
    );
    out.push(
        CheckRecord::new("fields.rest_energy.sigma_norm", "q", "⟨σ_j⟩⟨σ_j⟩ = 1")
            .claimed(1.0)
            .computed(norm_worst)
            .judge_abs(norm_worst, 1.0, 10.0 * tol),
    );
    let g = gyromagnetic_ratio(&k);
    let want = -e / (m * c);
    out.push(
        CheckRecord::new(
            "fields.gyromagnetic",
            "p",
            "μ_j = (−eħ/2mC)σ_j; S_j = (ħ/2)σ_j",
        )
        .claimed(want)
        .computed(g)
        .judge_rel((g - want).abs(), want.abs(), tol)
        .note("μ/S = −e/(mC), i.e. g = 2"),
    );

    let ratio = anomalous_moment_ratio(&k);
    let direct = e * e / (k.hbar() * c) / (2.0 * PI);
    out.push(
        CheckRecord::new("fields.anomalous_ratio", "r", "δμ_o = (μ_o/2π)(e²/Cħ)")
            .claimed(direct)
            .computed(ratio)
            .judge_rel((ratio - direct).abs(), direct, tol),
    );
    let physical = anomalous_moment_ratio(&PhysicalConstants::natural());
    out.push(
        CheckRecord::new(
            "fields.anomalous_ratio.physical",
            "r",
            "δμ_o/μ_o = e²/(2πCħ)",
        )
        .claimed(1.161410e-3)
        .computed(physical)
        .judge_abs((physical - 1.161410e-3).abs(), 1.161410e-3, 1e-9)
        .note("alpha = 1/137.035999084; reference value rounded to 7 significant digits"),
    );

    let (mut cross, mut v_ba1, mut ba1_h, mut norm_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let st = MomentumState::new(random_momentum(rng, 3.0), k, random_rep(rng)).unwrap();
        let (sign, spin) = STATES[rng.random_range(0..4)];
        let u = eigenspinor(&st, sign, spin, SpinAxis::Z);
        let r = self_action_reduction(&u, &st).unwrap();
        let en = st.energy();
        cross = cross.max(r.alpha_beta_alpha.norm());
        v_ba1 = v_ba1.max((r.with_self_potentials - r.reduced).norm() / en);
        ba1_h = ba1_h.max((r.reduced - r.hamiltonian).norm() / en);
        norm_err = norm_err.max((r.norm - 1.0).abs());
    }
    let generic = Spinor4::new(
        [0, 1, 2, 3].map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
    )
    .normalized()
    .unwrap();
    let gst = MomentumState::new([0.7, -0.2, 0.4], k, Representation::PauliDirac).unwrap();
    let gen = self_action_reduction(&generic, &gst).unwrap();
    out.push(
        CheckRecord::new("fields.reduction.norm", "w", "⟨Ψ⁺|Ψ⟩ = 1")
            .claimed(1.0)
            .computed(norm_err)
            .judge_abs(norm_err, 1.0, dtol),
    );
    out.push(
        CheckRecord::new("fields.reduction.cross_terms", "w", "⟨Ψ⁺|α_j|Ψ⟩⟨Ψ⁺|βα_j|Ψ⟩ = 0")
            .claimed(0.0)
            .computed(cross)
            .judge_abs(cross, 1.0, dtol)
            .note(format!(
                "100 random eigenspinors; asserted only there. A generic normalised spinor gives |Σ| = {:.6e}",
                gen.alpha_beta_alpha.norm()
            )),
    );
    out.push(
        CheckRecord::new(
            "fields.reduction.v_vs_ba1",
            "v",
            "−e⟨Ψ⁺|Ψ⟩(mC²/−e)⟨β⟩ + eC⟨α_j⟩(mC/e)⟨βα_j⟩ + C⟨α_jP_j⟩",
        )
        .claimed(0.0)
        .computed(v_ba1)
        .judge_with(v_ba1, v_ba1, dtol, ErrorMode::Relative),
    );
    out.push(
        CheckRecord::new(
            "fields.reduction.ba1_vs_h",
            "ba1",
            "⟨Ψ⁺|H_d|Ψ⟩ = C⟨Ψ⁺|α_jP_j|Ψ⟩ + mC²⟨Ψ⁺|β|Ψ⟩",
        )
        .claimed(0.0)
        .computed(ba1_h)
        .judge_with(ba1_h, ba1_h, dtol, ErrorMode::Relative),
    );

    SuiteOutput {
        checks: out,
        unchecked: vec![Unchecked {
            label: "r derivation narrative".into(),
            suite: Suite::Fields,
            reason: "the kinetic-energy-ratio argument has no checkable steps; only the resulting formula e²/(2πħC) is checked".into(),
        }],
    }
}

fn lattice(cfg: &RunConfig) -> SuiteOutput {
    let k = cfg.constants;
    let tol = cfg.tolerances.lattice;
    let mut out = Vec::new();
    let tfs = default_test_functions();
    let points = [[0.1, -0.4, 0.3], [0.9, 0.2, -0.7], [-0.5, 0.5, 0.0]];

    let b = [0.3, -1.2, 0.8];
    let e0 = [1.0, 0.5, -2.0];
    for (preset, eq, quote, want_h, want_e) in [
        (
            FieldPreset::UniformB { b },
            "l1",
            "p̂_jp̂_l − p̂_lp̂_j = iħ(e/C)ε_jlkH_k",
            b,
            [0.0; 3],
        ),
        (
            FieldPreset::LinearPhi { e0 },
            "l2",
            "p̂_jp̂_o − p̂_op̂_j = iħ(e/C)E_j",
            [0.0; 3],
            e0,
        ),
    ] {
        let mut worst: f64 = 0.0;
        for tf in &tfs {
            for x in points {
                let (h, e) = analytic_field_extract(&preset, tf, x, &k);
                for j in 0..3 {
                    worst = worst
                        .max((h[j] - want_h[j]).norm())
                        .max((e[j] - want_e[j]).norm());
                }
            }
        }
        let scale = want_h
            .iter()
            .chain(&want_e)
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        out.push(
            CheckRecord::new(format!("lattice.analytic.{}", preset.name()), eq, quote)
                .claimed(if eq == "l1" { want_h } else { want_e })
                .computed(worst)
                .judge_abs(worst, scale, tol)
                .note("exact derivatives of exp(k·x) test functions; max |estimate − field|"),
        );
    }

    let mut studies = Vec::new();
    for preset in [
        FieldPreset::UniformB { b: [0.0, 0.0, 1.0] },
        FieldPreset::LinearPhi {
            e0: [1.0, 0.0, 0.0],
        },
        FieldPreset::Zero,
    ] {
        studies.push((preset, convergence_study(preset, &SPACINGS, &k)));
    }
    for (preset, study) in studies {
        let id = format!("lattice.convergence.{}", preset.name());
        let (eq, quote) = match preset {
            FieldPreset::UniformB { .. } => ("l1", "iħ(e/C)ε_jlkH_k"),
            FieldPreset::LinearPhi { .. } => ("l2", "iħ(e/C)E_j"),
            _ => ("j", "P̂_jP̂_l − P̂_lP̂_j = 0"),
        };
        let rec = CheckRecord::new(id, eq, quote);
        let rec = match study {
            Ok(s) => {
                let rec = rec
                    .computed(s.order.to_string())
                    .oracle(s.errors.clone())
                    .note(format!(
                        "h = {:?}; oracle holds the max error at each h",
                        s.spacings
                    ));
                match (preset, s.order) {
                    (FieldPreset::UniformB { .. }, OrderEstimate::Order(p)) => {
                        rec.claimed(2.0).judge_with(
                            (p - 2.0).abs(),
                            (p - 2.0).abs() / 2.0,
                            ORDER_TOL,
                            ErrorMode::Absolute,
                        )
                    }
                    (FieldPreset::LinearPhi { .. }, o) => {
                        rec.claimed("order ≥ 1.9 or exact").judge_flag(
                            matches!(o, OrderEstimate::Exact)
                                || matches!(o, OrderEstimate::Order(p) if p >= 1.9),
                        )
                    }
                    (FieldPreset::Zero, o) => {
                        rec.claimed("exact").judge_flag(o == OrderEstimate::Exact)
                    }
                    (_, _) => rec.claimed(2.0).judge_flag(false),
                }
            }
            Err(err) => rec.computed(err.to_string()).judge_flag(false),
        };
        out.push(rec);
    }

    let grid = Grid3::covering(1.0, 0.1).unwrap();
    let spread = FieldConfig::new(FieldPreset::UniformB { b: [0.0, 0.0, 1.0] }, &grid, &k)
        .and_then(|c| commutator_field_extract(&c, &grid, &tfs, &k))
        .map(|est| est.max_spread());
    let kmax = tfs
        .iter()
        .flat_map(|t| t.k.iter().map(|z| z.norm_sqr()))
        .fold(0.0, f64::max);
    let bound = 0.5 * kmax * grid.h() * grid.h();
    match spread {
        Ok(s) => out.push(
            CheckRecord::plumbing("lattice.test_function_independence")
                .claimed(10.0 * bound)
                .computed(s)
                .judge_abs(s, 1.0, 10.0 * bound)
                .note("pairwise spread of H estimates across test functions at h = 0.1, |B| = 1; bound |k|²h²/2"),
        ),
        Err(e) => out.push(CheckRecord::plumbing("lattice.test_function_independence").computed(e.to_string()).judge_flag(false)),
    }

    let small = Grid3::new(9, 0.2).unwrap();
    let psi = tfs[2].sample(&small);
    let preset = FieldPreset::UniformB {
        b: [0.3, 0.1, -1.0],
    };
    let mut anti: f64 = 0.0;
    for a in 0..=3 {
        for bb in 0..=3 {
            let ab = commutator_apply(a, bb, &preset, &small, &psi, &k).unwrap();
            let ba = commutator_apply(bb, a, &preset, &small, &psi, &k).unwrap();
            for i in small.interior() {
                anti = anti.max((ab[i] + ba[i]).norm());
            }
        }
    }
    out.push(
        CheckRecord::plumbing("lattice.antisymmetry")
            .claimed(0.0)
            .computed(anti)
            .judge_abs(anti, 1.0, 0.0),
    );

    let wave_k = 0.7;
    let g = Grid3::new(21, 0.1).unwrap();
    let psi = g.sample(|x| C64::new(0.0, wave_k * x[0]).exp());
    let got = kinetic_momentum_apply(1, &FieldPreset::Zero, &g, &psi, &k).unwrap();
    let symbol = k.hbar() * (wave_k * g.h()).sin() / g.h();
    let err = g
        .interior()
        .into_iter()
        .map(|i| (got[i] - psi[i] * symbol).norm())
        .fold(0.0, f64::max);
    out.push(
        CheckRecord::plumbing("lattice.free_plane_wave")
            .claimed(symbol)
            .computed(err)
            .judge_abs(err, symbol, tol)
            .note("central-difference symbol ħ sin(kh)/h"),
    );

    SuiteOutput {
        checks: out,
        unchecked: vec![],
    }
}
