use diraclab_core::clifford::{alpha, anticommutator, beta, Representation};
use diraclab_core::dynamics::{
    alpha_evolved_oracle, degeneracy, eigenspinor, hamiltonian, spectrum, zbw_closed_form,
    EnergySign, MomentumState, SpinAxis, SpinLabel,
};
use diraclab_core::fields::{
    anomalous_moment_ratio, rest_energy, self_action_reduction, self_field_strength,
    self_fields_commutator, self_fields_matrix_maxwell,
};
use diraclab_core::lattice::{
    commutator_apply, kinetic_momentum_apply, AnalyticTestFunction, FieldPreset, Grid3,
};
use diraclab_core::spinor::{jz_apply, Branch, CylindricalSpinor, Profile};
use diraclab_core::{ComplexMatrix, PhysicalConstants, C64};
use proptest::prelude::*;

fn rep() -> impl Strategy<Value = Representation> {
    prop_oneof![
        Just(Representation::PauliDirac),
        Just(Representation::Standard)
    ]
}

fn momentum() -> impl Strategy<Value = [f64; 3]> {
    [-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64]
}

fn constants() -> impl Strategy<Value = PhysicalConstants> {
    (0.2..5.0f64, 0.2..5.0f64, 0.2..5.0f64, 0.05..3.0f64)
        .prop_map(|(h, c, m, e)| PhysicalConstants::new(h, c, m, e).unwrap())
}

fn sign() -> impl Strategy<Value = EnergySign> {
    prop_oneof![Just(EnergySign::Positive), Just(EnergySign::Negative)]
}

fn spin() -> impl Strategy<Value = SpinLabel> {
    prop_oneof![Just(SpinLabel::Up), Just(SpinLabel::Down)]
}

fn hermitian() -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(-2.0..2.0f64, 32).prop_map(|v| {
        let raw = ComplexMatrix::from_row_major(
            4,
            (0..16).map(|i| C64::new(v[2 * i], v[2 * i + 1])).collect(),
        )
        .unwrap();
        (&raw + &raw.adjoint()).scale_real(0.5)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_is_doubly_degenerate(p in momentum(), k in constants(), r in rep()) {
        let s = MomentumState::new(p, k, r).unwrap();
        let e = s.energy();
        let spec = spectrum(&s).unwrap();
        prop_assert_eq!(degeneracy(&spec, e, 1e-12), (2, 2));
    }

    #[test]
    fn eigenspinors_solve_the_eigenproblem(
        p in momentum(), k in constants(), r in rep(), sg in sign(), sp in spin(),
        theta in 0.0..std::f64::consts::PI, phi in -3.2..3.2f64,
    ) {
        let s = MomentumState::new(p, k, r).unwrap();
        let u = eigenspinor(&s, sg, sp, SpinAxis { theta, phi });
        let ev = if sg == EnergySign::Positive { s.energy() } else { -s.energy() };
        let hu = hamiltonian(&s).apply(u.as_slice());
        for (a, b) in hu.iter().zip(u.as_slice()) {
            prop_assert!((a - b * ev).norm() <= 1e-12 * ev.abs().max(1.0));
        }
        prop_assert!(u.is_normalized());
    }

    #[test]
    fn pade_matches_spectral_exponential(h in hermitian(), s in -3.0..3.0f64) {
        let pade = h.scale(C64::new(0.0, s)).exp().unwrap();
        let spectral = h.exp_i_hermitian(s).unwrap();
        prop_assert!(pade.max_abs_diff(&spectral) < 1e-11);
    }

    #[test]
    fn evolution_preserves_clifford_relations(p in momentum(), t in 0.0..10.0f64, r in rep()) {
        let s = MomentumState::new(p, PhysicalConstants::unit(), r).unwrap();
        let a: Vec<ComplexMatrix> = (1..=3).map(|j| alpha_evolved_oracle(&s, j, t).unwrap()).collect();
        for j in 0..3 {
            for l in 0..3 {
                let ac = anticommutator(&a[j], &a[l]).unwrap();
                let want = if j == l { ComplexMatrix::identity(4).scale_real(2.0) } else { ComplexMatrix::zeros(4) };
                prop_assert!(ac.max_abs_diff(&want) < 1e-11);
            }
        }
    }

    #[test]
    fn closed_form_velocity_is_oracle_velocity(p in momentum(), t in 0.0..5.0f64, axis in 1usize..=3) {
        let k = PhysicalConstants::unit();
        let s = MomentumState::new(p, k, Representation::PauliDirac).unwrap();
        let h = 1e-5;
        let fd = (&zbw_closed_form(&s, axis, t + h).unwrap().total()
            - &zbw_closed_form(&s, axis, t - h).unwrap().total()).scale_real(0.5 / h);
        let oracle = alpha_evolved_oracle(&s, axis, t).unwrap();
        prop_assert!(fd.max_abs_diff(&oracle) < 1e-8);
    }

    #[test]
    fn self_field_routes_agree(k in constants(), r in rep()) {
        let a = self_fields_commutator(&k, r);
        let b = self_fields_matrix_maxwell(&k, r);
        prop_assert!(a.electric_is_exactly_zero() && b.electric_is_exactly_zero());
        prop_assert!(a.max_abs_diff(&b) <= 1e-14 * self_field_strength(&k));
        let s2 = self_field_strength(&k).powi(2);
        for j in 0..3 {
            let sq = &a.h[j] * &a.h[j];
            prop_assert!(sq.max_abs_diff(&ComplexMatrix::identity(4).scale_real(s2)) <= 1e-13 * s2);
            for l in (j + 1)..3 {
                prop_assert!(anticommutator(&a.h[j], &a.h[l]).unwrap().max_abs() <= 1e-13 * s2);
            }
        }
    }

    #[test]
    fn rest_energy_is_independent_of_direction(
        theta in 0.0..std::f64::consts::PI, phi in -3.2..3.2f64, k in constants(),
    ) {
        let want = k.rest_energy();
        prop_assert!(((rest_energy(theta, phi, &k) - want) / want).abs() <= 1e-14);
    }

    #[test]
    fn anomalous_ratio_depends_only_on_alpha(k in constants(), lambda in 0.1..10.0f64) {
        let scaled = PhysicalConstants::new(k.hbar() * lambda, k.c() / lambda, k.mass() * 3.0, k.charge()).unwrap();
        let a = anomalous_moment_ratio(&k);
        prop_assert!(((anomalous_moment_ratio(&scaled) - a) / a).abs() < 1e-14);
    }

    #[test]
    fn self_action_terms_vanish_on_eigenspinors(
        p in momentum(), k in constants(), r in rep(), sg in sign(), sp in spin(),
    ) {
        let s = MomentumState::new(p, k, r).unwrap();
        let u = eigenspinor(&s, sg, sp, SpinAxis::Z);
        let red = self_action_reduction(&u, &s).unwrap();
        let scale = s.energy();
        prop_assert!(red.alpha_beta_alpha.norm() <= 1e-12);
        prop_assert!((red.reduced - red.hamiltonian).norm() <= 1e-12 * scale);
        prop_assert!((red.with_self_potentials - red.hamiltonian).norm() <= 1e-12 * scale);
    }

    #[test]
    fn jz_branch_eigenvalues(l in -5i32..=5, hbar in 0.1..4.0f64, plus in any::<bool>()) {
        let k = PhysicalConstants::new(hbar, 1.0, 1.0, 1.0).unwrap();
        let branch = if plus { Branch::Plus } else { Branch::Minus };
        let cyl = CylindricalSpinor::new(branch, l, [Profile::Constant { amplitude: 1.0 }; 4]);
        let r = jz_apply(&cyl, &k);
        let want = hbar * (l as f64 + if plus { 0.5 } else { -0.5 });
        prop_assert!(r.is_eigenstate);
        prop_assert_eq!(r.eigenvalue, Some(want));
    }

    #[test]
    fn lattice_momentum_is_linear(
        a in proptest::collection::vec(-1.0..1.0f64, 6),
        z in (-2.0..2.0f64, -2.0..2.0f64),
        axis in 0usize..=3,
    ) {
        let g = Grid3::new(9, 0.2).unwrap();
        let preset = FieldPreset::UniformB { b: [0.3, 0.1, -1.0] };
        let k = PhysicalConstants::unit();
        let f1 = AnalyticTestFunction { amplitude: C64::new(1.0, 0.0), k: [C64::new(a[0], a[1]), C64::new(a[2], 0.0), C64::new(0.0, a[3])] };
        let f2 = AnalyticTestFunction { amplitude: C64::new(0.0, 1.0), k: [C64::new(a[4], 0.0), C64::new(0.0, a[5]), C64::new(0.2, 0.0)] };
        let s = C64::new(z.0, z.1);
        let (p1, p2) = (f1.sample(&g), f2.sample(&g));
        let mix: Vec<C64> = p1.iter().zip(&p2).map(|(x, y)| x + y * s).collect();
        let o1 = kinetic_momentum_apply(axis, &preset, &g, &p1, &k).unwrap();
        let o2 = kinetic_momentum_apply(axis, &preset, &g, &p2, &k).unwrap();
        let om = kinetic_momentum_apply(axis, &preset, &g, &mix, &k).unwrap();
        for i in 0..g.len() {
            prop_assert!((om[i] - (o1[i] + o2[i] * s)).norm() < 1e-10);
        }
    }

    #[test]
    fn lattice_commutator_is_antisymmetric(j in 0usize..=3, l in 0usize..=3) {
        let g = Grid3::new(9, 0.2).unwrap();
        let preset = FieldPreset::LinearPhi { e0: [0.5, -0.2, 1.0] };
        let k = PhysicalConstants::unit();
        let psi = AnalyticTestFunction { amplitude: C64::new(1.0, 0.5), k: [C64::new(0.1, 0.3); 3] }.sample(&g);
        let ab = commutator_apply(j, l, &preset, &g, &psi, &k).unwrap();
        let ba = commutator_apply(l, j, &preset, &g, &psi, &k).unwrap();
        for i in g.interior() {
            prop_assert!((ab[i] + ba[i]).norm() == 0.0);
        }
    }
}

#[test]
fn beta_squares_to_identity_in_both_representations() {
    for r in Representation::ALL {
        let b = beta(r);
        assert_eq!(&b * &b, ComplexMatrix::identity(4));
        for j in 1..=3 {
            assert!(anticommutator(&alpha(j, r).unwrap(), &b).unwrap().is_zero());
        }
    }
}
