//! Pauli and Dirac matrices, commutator calculus and the Clifford check.

use serde::{Deserialize, Serialize};

use crate::check::CheckRecord;
use crate::error::{DiracError, Result};
use crate::matrix::ComplexMatrix;
use crate::C64;

/// Tolerance for identities between matrices with entries in `{0, ±1, ±i}`.
pub const EXACT_TOL: f64 = 1e-14;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Which printed set of Dirac generators to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    /// `α_j` with off-diagonal `σ_j` blocks, `β = diag(1, 1, −1, −1)`.
    PauliDirac,
    /// `γ_j = diag(σ_j, −σ_j)` blockwise, `γ_o` with off-diagonal identity
    /// blocks.
    Standard,
}

impl Representation {
    pub const ALL: [Representation; 2] = [Representation::PauliDirac, Representation::Standard];

    pub fn label(self) -> &'static str {
        match self {
            Representation::PauliDirac => "pauli_dirac",
            Representation::Standard => "standard",
        }
    }
}

/// One of the four Dirac generators. `Alpha*` map to `γ_j` and `Beta` to
/// `γ_o` in the standard set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    Alpha1,
    Alpha2,
    Alpha3,
    Beta,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::Alpha1,
        GeneratorKind::Alpha2,
        GeneratorKind::Alpha3,
        GeneratorKind::Beta,
    ];

    pub fn alpha(axis: usize) -> Result<Self> {
        match axis {
            1 => Ok(GeneratorKind::Alpha1),
            2 => Ok(GeneratorKind::Alpha2),
            3 => Ok(GeneratorKind::Alpha3),
            _ => Err(axis_error(axis)),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GeneratorKind::Alpha1 => "alpha1",
            GeneratorKind::Alpha2 => "alpha2",
            GeneratorKind::Alpha3 => "alpha3",
            GeneratorKind::Beta => "beta",
        }
    }
}

fn axis_error(axis: usize) -> DiracError {
    DiracError::domain(format!("axis index must be 1, 2 or 3, got {axis}"))
}

/// Pauli matrix `σ_j` for `j ∈ {1, 2, 3}`.
pub fn pauli(axis: usize) -> Result<ComplexMatrix> {
    let m = match axis {
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => return Err(axis_error(axis)),
    };
    Ok(ComplexMatrix::from_rows(m))
}

fn pauli_unchecked(axis: usize) -> ComplexMatrix {
    pauli(axis).expect("axis in 1..=3")
}

/// The 4×4 generator of the requested kind, exactly as printed.
pub fn dirac_generator(kind: GeneratorKind, rep: Representation) -> ComplexMatrix {
    let z = ComplexMatrix::zeros(2);
    let one = ComplexMatrix::identity(2);
    let m = match (rep, kind) {
        (Representation::PauliDirac, GeneratorKind::Beta) => {
            ComplexMatrix::from_blocks(&one, &z, &z, &-&one)
        }
        (Representation::Standard, GeneratorKind::Beta) => {
            ComplexMatrix::from_blocks(&z, &one, &one, &z)
        }
        (Representation::PauliDirac, alpha) => {
            let s = pauli_unchecked(axis_of(alpha));
            ComplexMatrix::from_blocks(&z, &s, &s, &z)
        }
        (Representation::Standard, alpha) => {
            let s = pauli_unchecked(axis_of(alpha));
            ComplexMatrix::from_blocks(&s, &z, &z, &-&s)
        }
    };
    m.expect("2x2 blocks")
}

fn axis_of(kind: GeneratorKind) -> usize {
    match kind {
        GeneratorKind::Alpha1 => 1,
        GeneratorKind::Alpha2 => 2,
        GeneratorKind::Alpha3 => 3,
        GeneratorKind::Beta => unreachable!("beta has no axis"),
    }
}

/// `α_j` (or `γ_j`) for `j ∈ {1, 2, 3}`.
pub fn alpha(axis: usize, rep: Representation) -> Result<ComplexMatrix> {
    Ok(dirac_generator(GeneratorKind::alpha(axis)?, rep))
}

pub fn beta(rep: Representation) -> ComplexMatrix {
    dirac_generator(GeneratorKind::Beta, rep)
}

/// `[α_1, α_2, α_3, β]` for the representation.
pub fn generators(rep: Representation) -> [ComplexMatrix; 4] {
    GeneratorKind::ALL.map(|k| dirac_generator(k, rep))
}

/// Spin matrix `Σ_k = diag(σ_k, σ_k)`, the 4×4 reading of `σ_k`.
pub fn spin_matrix(axis: usize) -> Result<ComplexMatrix> {
    let s = pauli(axis)?;
    let z = ComplexMatrix::zeros(2);
    ComplexMatrix::from_blocks(&s, &z, &z, &s)
}

/// Unitary `S` with `S α_j S† = γ_j` and `S β S† = γ_o`.
pub fn standard_from_pauli_dirac() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one = ComplexMatrix::identity(2).scale_real(h);
    ComplexMatrix::from_blocks(&one, &one, &one, &-&one).expect("2x2 blocks")
}

/// Levi-Civita symbol on 1-based axes.
pub fn levi_civita(j: usize, l: usize, k: usize) -> f64 {
    match (j, l, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1.0,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1.0,
        _ => 0.0,
    }
}

/// `AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.try_mul(b)?.try_sub(&b.try_mul(a)?)
}

/// `AB + BA`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.try_mul(b)?.try_add(&b.try_mul(a)?)
}

/// Matrix inverse, refusing inputs with condition estimate above `1e12`.
pub fn mat_inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.inverse()
}

pub fn mat_exp(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.exp()
}

/// Checks the anticommutation table, Hermiticity and tracelessness of the
/// representation's generators.
pub fn clifford_check(rep: Representation, tol: f64) -> Vec<CheckRecord> {
    clifford_check_generators(&generators(rep), rep.label(), tol)
}

/// Same as [`clifford_check`] on caller-supplied generators `[G_1, G_2,
/// G_3, G_o]`. The sixteen ordered pairs `{G_a, G_b} = 2δ_ab I` form the
/// Clifford relations; Hermiticity and tracelessness are recorded as
/// separate claims.
pub fn clifford_check_generators(
    gens: &[ComplexMatrix; 4],
    label: &str,
    tol: f64,
) -> Vec<CheckRecord> {
    let eq = match label {
        "standard" => "b2",
        _ => "a2",
    };
    let quote = match eq {
        "b2" => "γ_j = |σ_j 0; 0 −σ_j|, γ_o = |0 1; 1 0|",
        _ => "α_j = |0 σ_j; σ_j 0|, β = |1 0; 0 −1|",
    };
    let names = GeneratorKind::ALL.map(GeneratorKind::label);
    let id4 = ComplexMatrix::identity(4);
    let zero4 = ComplexMatrix::zeros(4);
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            let ac = anticommutator(&gens[a], &gens[b]).expect("4x4 generators");
            let want = if a == b {
                id4.scale_real(2.0)
            } else {
                zero4.clone()
            };
            let err = ac.max_abs_diff(&want);
            out.push(
                CheckRecord::new(
                    format!("algebra.{label}.anticomm.{}.{}", names[a], names[b]),
                    eq,
                    quote,
                )
                .claimed(want)
                .computed(ac)
                .judge_abs(err, 2.0, tol),
            );
        }
    }
    for (g, name) in gens.iter().zip(names) {
        let err = g.max_abs_diff(&g.adjoint());
        out.push(
            CheckRecord::new(format!("algebra.{label}.hermitian.{name}"), eq, quote)
                .claimed(0.0)
                .computed(err)
                .judge_abs(err, 1.0, tol)
                .note("max |G − G†|"),
        );
        let tr = g.trace().norm();
        out.push(
            CheckRecord::new(format!("algebra.{label}.traceless.{name}"), eq, quote)
                .claimed(0.0)
                .computed(tr)
                .judge_abs(tr, 1.0, tol),
        );
    }
    out
}

/// The commutator `[α_j, α_l]` equals `2i ε_jlk Σ_k`, with `Σ_k` the
/// block-diagonal completion of `σ_k`.
pub fn sigma_completion_check(rep: Representation, tol: f64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (j, l, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        let c = commutator(&alpha(j, rep).unwrap(), &alpha(l, rep).unwrap()).unwrap();
        let quotient = c.scale(C64::new(0.0, -0.5));
        let sigma = spin_matrix(k).unwrap();
        // The quotient must be block diagonal with both blocks equal to σ_k.
        let off = quotient
            .block(0, 1)
            .max_abs()
            .max(quotient.block(1, 0).max_abs());
        let upper = quotient.block(0, 0).max_abs_diff(&pauli_unchecked(k));
        let lower = quotient.block(1, 1).max_abs_diff(&pauli_unchecked(k));
        let err = off.max(upper).max(lower).max(quotient.max_abs_diff(&sigma));
        out.push(
            CheckRecord::new(
                format!("algebra.{}.sigma_completion.{j}{l}", rep.label()),
                "n1",
                "m²C²(α_jα_l − α_lα_j) = 2i m²C² ε_jlk σ_k",
            )
            .claimed(sigma)
            .computed(quotient)
            .judge_abs(err, 1.0, tol)
            .note("σ_k in 4x4 context read as diag(σ_k, σ_k)"),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_z_is_diagonal() {
        let s3 = pauli(3).unwrap();
        assert_eq!(
            s3,
            ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap()
        );
    }

    #[test]
    fn pauli_product_and_traces() {
        let prod = &pauli(1).unwrap() * &pauli(2).unwrap();
        assert_eq!(prod, pauli(3).unwrap().scale(I));
        for j in 1..=3 {
            let s = pauli(j).unwrap();
            assert_eq!(s.trace(), c(0.0, 0.0));
            assert!(s.is_hermitian(0.0));
            assert_eq!(&s * &s, ComplexMatrix::identity(2));
        }
    }

    #[test]
    fn pauli_rejects_bad_axis() {
        assert!(matches!(pauli(0), Err(DiracError::Domain(_))));
        assert!(matches!(pauli(4), Err(DiracError::Domain(_))));
        assert!(alpha(7, Representation::PauliDirac).is_err());
    }

    #[test]
    fn printed_forms() {
        let b = beta(Representation::PauliDirac);
        assert_eq!(
            b,
            ComplexMatrix::diagonal(&[c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)])
                .unwrap()
        );
        let a3 = alpha(3, Representation::PauliDirac).unwrap();
        assert_eq!(a3.block(0, 1), pauli(3).unwrap());
        assert_eq!(a3.block(1, 0), pauli(3).unwrap());
        assert!(a3.block(0, 0).is_zero() && a3.block(1, 1).is_zero());

        let go = beta(Representation::Standard);
        assert_eq!(go.block(0, 1), ComplexMatrix::identity(2));
        assert_eq!(go.block(1, 0), ComplexMatrix::identity(2));
        assert!(go.block(0, 0).is_zero() && go.block(1, 1).is_zero());
        let g2 = alpha(2, Representation::Standard).unwrap();
        assert_eq!(g2.block(0, 0), pauli(2).unwrap());
        assert_eq!(g2.block(1, 1), -&pauli(2).unwrap());
    }

    #[test]
    fn commutator_examples() {
        let a1 = alpha(1, Representation::PauliDirac).unwrap();
        let a2 = alpha(2, Representation::PauliDirac).unwrap();
        let id = ComplexMatrix::identity(4);
        assert!(commutator(&id, &a1).unwrap().is_zero());
        assert!(commutator(&a1, &a1).unwrap().is_zero());
        let c12 = commutator(&a1, &a2).unwrap();
        assert_eq!(c12, spin_matrix(3).unwrap().scale(c(0.0, 2.0)));
    }

    #[test]
    fn anticommutator_examples() {
        for rep in Representation::ALL {
            let g = generators(rep);
            for a in &g[..3] {
                assert_eq!(
                    anticommutator(a, a).unwrap(),
                    ComplexMatrix::identity(4).scale_real(2.0)
                );
            }
            assert!(anticommutator(&g[0], &g[3]).unwrap().is_zero());
        }
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let e = commutator(&ComplexMatrix::identity(2), &ComplexMatrix::identity(4)).unwrap_err();
        assert!(matches!(e, DiracError::DimensionMismatch { .. }));
        assert!(anticommutator(&ComplexMatrix::identity(4), &ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn inverse_examples() {
        let id = ComplexMatrix::identity(4);
        assert!(mat_inverse(&id).unwrap().max_abs_diff(&id) < 1e-15);
        for rep in Representation::ALL {
            let b = beta(rep);
            assert!(mat_inverse(&b).unwrap().max_abs_diff(&b) < 1e-15);
        }
    }

    #[test]
    fn exp_examples() {
        let pi = std::f64::consts::PI;
        let e = mat_exp(&pauli(3).unwrap().scale(c(0.0, pi))).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::identity(2).scale_real(-1.0)) < 1e-12);
        let u = mat_exp(&spin_matrix(3).unwrap().scale(c(0.0, 0.77))).unwrap();
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn both_representations_pass_sixteen_relations() {
        for rep in Representation::ALL {
            let recs = clifford_check(rep, EXACT_TOL);
            let anticomm: Vec<_> = recs
                .iter()
                .filter(|r| r.claim_id.contains(".anticomm."))
                .collect();
            assert_eq!(anticomm.len(), 16);
            assert!(recs.iter().all(|r| r.pass), "{rep:?}");
        }
    }

    #[test]
    fn tampered_generator_fails() {
        let mut g = generators(Representation::PauliDirac);
        g[3][(0, 0)] = c(-1.0, 0.0);
        let recs = clifford_check_generators(&g, "tampered", EXACT_TOL);
        assert!(recs.iter().any(|r| !r.pass));
    }

    #[test]
    fn intertwiner_maps_representations() {
        let s = standard_from_pauli_dirac();
        let sd = s.adjoint();
        for k in GeneratorKind::ALL {
            let pd = dirac_generator(k, Representation::PauliDirac);
            let st = dirac_generator(k, Representation::Standard);
            assert!((&(&s * &pd) * &sd).max_abs_diff(&st) < 1e-15);
        }
    }

    #[test]
    fn sigma_completion_holds_in_both() {
        for rep in Representation::ALL {
            assert!(sigma_completion_check(rep, EXACT_TOL)
                .iter()
                .all(|r| r.pass));
        }
    }
}
