//! Small dense complex matrices.
//!
//! Everything in the model lives in 2×2 or 4×4 complex matrices, so the
//! storage is a flat row-major `Vec` and the algorithms are the textbook
//! ones: Gaussian elimination with partial pivoting for inverses, Padé(13)
//! scaling-and-squaring for the exponential. Hermitian eigenproblems are
//! delegated to `nalgebra`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{DiracError, Result};
use crate::C64;

/// Largest 1-norm condition estimate accepted by [`ComplexMatrix::inverse`].
pub const MAX_CONDITION: f64 = 1e12;

/// Dense square complex matrix of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    fn check_dim(dim: usize) -> Result<()> {
        if dim == 2 || dim == 4 {
            Ok(())
        } else {
            Err(DiracError::domain(format!(
                "matrix dimension must be 2 or 4, got {dim}"
            )))
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::check_dim(dim).expect("valid dimension");
        ComplexMatrix {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: Vec<C64>) -> Result<Self> {
        Self::check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(DiracError::domain(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(ComplexMatrix { dim, entries })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Self {
        let entries = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_row_major(N, entries).expect("dimension 2 or 4")
    }

    pub fn diagonal(values: &[C64]) -> Result<Self> {
        Self::check_dim(values.len())?;
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        Ok(m)
    }

    /// Assembles a 4×4 matrix from four 2×2 blocks `[[a, b], [c, d]]`.
    pub fn from_blocks(
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        c: &ComplexMatrix,
        d: &ComplexMatrix,
    ) -> Result<Self> {
        for blk in [a, b, c, d] {
            if blk.dim != 2 {
                return Err(DiracError::DimensionMismatch {
                    left: 2,
                    right: blk.dim,
                });
            }
        }
        let mut m = Self::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = a[(i, j)];
                m[(i, j + 2)] = b[(i, j)];
                m[(i + 2, j)] = c[(i, j)];
                m[(i + 2, j + 2)] = d[(i, j)];
            }
        }
        Ok(m)
    }

    /// Extracts the 2×2 block at block position (`bi`, `bj`) of a 4×4 matrix.
    pub fn block(&self, bi: usize, bj: usize) -> ComplexMatrix {
        assert!(self.dim == 4 && bi < 2 && bj < 2);
        let mut b = Self::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                b[(i, j)] = self[(2 * bi + i, 2 * bj + j)];
            }
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    fn ensure_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(DiracError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out.entries[i * n + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(
            v.len(),
            self.dim,
            "vector length must match matrix dimension"
        );
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    /// `⟨v|A|v⟩` without normalisation.
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let av = self.apply(v);
        v.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Maximum column sum of moduli.
    pub fn norm_one(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Solves `A X = B` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        self.ensure_same_dim(rhs)?;
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut b = rhs.entries.clone();
        let scale = self.max_abs();
        if scale == 0.0 {
            return Err(DiracError::IllConditioned {
                message: "zero matrix is singular".into(),
                condition: f64::INFINITY,
            });
        }
        for col in 0..n {
            let (piv, piv_abs) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if piv_abs <= f64::EPSILON * scale * n as f64 {
                return Err(DiracError::IllConditioned {
                    message: format!("zero pivot in column {col}"),
                    condition: f64::INFINITY,
                });
            }
            if piv != col {
                for k in 0..n {
                    a.swap(col * n + k, piv * n + k);
                    b.swap(col * n + k, piv * n + k);
                }
            }
            let p = a[col * n + col];
            for r in (col + 1)..n {
                let f = a[r * n + col] / p;
                if f == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in col..n {
                    let t = a[col * n + k];
                    a[r * n + k] -= f * t;
                }
                for k in 0..n {
                    let t = b[col * n + k];
                    b[r * n + k] -= f * t;
                }
            }
        }
        for col in (0..n).rev() {
            let p = a[col * n + col];
            for k in 0..n {
                let mut s = b[col * n + k];
                for j in (col + 1)..n {
                    s -= a[col * n + j] * b[j * n + k];
                }
                b[col * n + k] = s / p;
            }
        }
        Ok(ComplexMatrix { dim: n, entries: b })
    }

    /// Inverse together with the 1-norm condition estimate `‖A‖₁‖A⁻¹‖₁`.
    pub fn inverse_with_condition(&self) -> Result<(Self, f64)> {
        if !self.is_finite() {
            return Err(DiracError::domain("matrix has non-finite entries"));
        }
        let inv = self.solve(&Self::identity(self.dim))?;
        let cond = self.norm_one() * inv.norm_one();
        if !(cond.is_finite() && cond < MAX_CONDITION) {
            return Err(DiracError::IllConditioned {
                message: "matrix is too ill-conditioned to invert".into(),
                condition: cond,
            });
        }
        Ok((inv, cond))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with_condition().map(|(inv, _)| inv)
    }

    /// Matrix exponential by scaling-and-squaring with a Padé(13)
    /// approximant.
    pub fn exp(&self) -> Result<Self> {
        if !self.is_finite() {
            return Err(DiracError::domain(
                "matrix exponential of non-finite entries",
            ));
        }
        let norm = self.norm_one();
        let s = if norm > THETA_13 {
            (norm / THETA_13).log2().ceil() as i32
        } else {
            0
        };
        let scaled = self.scale_real(0.5f64.powi(s));
        let mut result = pade13(&scaled)?;
        for _ in 0..s {
            result = &result * &result;
        }
        Ok(result)
    }

    /// Eigen-decomposition of a Hermitian matrix. Eigenvalues come back in
    /// ascending order; column `k` of the second value is the eigenvector of
    /// eigenvalue `k`.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        if !self.is_finite() {
            return Err(DiracError::domain(
                "eigen-decomposition of non-finite entries",
            ));
        }
        let scale = self.max_abs().max(1.0);
        if !self.is_hermitian(1e-12 * scale) {
            return Err(DiracError::domain("matrix is not Hermitian"));
        }
        let n = self.dim;
        let m = DMatrix::from_fn(n, n, |i, j| self[(i, j)]);
        let eig = m.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vecs = Self::zeros(n);
        for (col, &k) in order.iter().enumerate() {
            for i in 0..n {
                vecs[(i, col)] = eig.eigenvectors[(i, k)];
            }
        }
        Ok((values, vecs))
    }

    /// Ascending eigenvalues of a Hermitian matrix.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.hermitian_eigen().map(|(v, _)| v)
    }

    /// `exp(i·s·A)` for Hermitian `A` via its eigen-decomposition.
    pub fn exp_i_hermitian(&self, s: f64) -> Result<Self> {
        let (vals, vecs) = self.hermitian_eigen()?;
        let phases: Vec<C64> = vals.iter().map(|&v| C64::from_polar(1.0, s * v)).collect();
        let d = Self::diagonal(&phases)?;
        Ok(&(&vecs * &d) * &vecs.adjoint())
    }
}

// Higham (2005), table 10.2.
const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn pade13(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let b = &PADE_13;
    let n = a.dim();
    let id = ComplexMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u_inner = &(&(&a6.scale_real(b[13]) + &a4.scale_real(b[11])) + &a2.scale_real(b[9]));
    let u_tail = &(&(&(&a6.scale_real(b[7]) + &a4.scale_real(b[5])) + &a2.scale_real(b[3]))
        + &id.scale_real(b[1]));
    let u = a * &(&(&a6 * u_inner) + u_tail);
    let v_inner = &(&(&a6.scale_real(b[12]) + &a4.scale_real(b[10])) + &a2.scale_real(b[8]));
    let v_tail = &(&(&(&a6.scale_real(b[6]) + &a4.scale_real(b[4])) + &a2.scale_real(b[2]))
        + &id.scale_real(b[0]));
    let v = &(&a6 * v_inner) + v_tail;
    let p = &v + &u;
    let q = &v - &u;
    q.solve(&p)
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

struct EntryPairs<'a>(&'a [C64]);

impl Serialize for EntryPairs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for z in self.0 {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

/// Serialises as `{dim, entries: [[re, im], ...]}` in row-major order.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ComplexMatrix", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("entries", &EntryPairs(&self.entries))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample4() -> ComplexMatrix {
        ComplexMatrix::from_rows([
            [c(2.0, 0.0), c(0.5, -1.0), c(0.0, 0.3), c(1.0, 0.0)],
            [c(0.1, 0.0), c(3.0, 1.0), c(-0.2, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 1.0), c(4.0, 0.0), c(0.5, 0.5)],
            [c(-1.0, 0.0), c(0.0, 0.0), c(0.0, -2.0), c(1.5, 0.0)],
        ])
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(ComplexMatrix::from_row_major(3, vec![c(0.0, 0.0); 9]).is_err());
        assert!(ComplexMatrix::from_row_major(2, vec![c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn mismatched_product_is_an_error() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(4);
        assert_eq!(
            a.try_mul(&b).unwrap_err(),
            DiracError::DimensionMismatch { left: 2, right: 4 }
        );
    }

    #[test]
    fn inverse_round_trips() {
        let a = sample4();
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        let back = inv.inverse().unwrap();
        assert!(back.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn singular_inverse_reports_condition() {
        let mut a = sample4();
        for j in 0..4 {
            let v = a[(0, j)];
            a[(1, j)] = v * 2.0;
        }
        match a.inverse() {
            Err(DiracError::IllConditioned { condition, .. }) => {
                assert!(condition >= MAX_CONDITION)
            }
            other => panic!("expected ill-conditioned error, got {other:?}"),
        }
    }

    #[test]
    fn nearly_singular_is_rejected() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(1e-13, 0.0)]).unwrap();
        assert!(matches!(
            a.inverse(),
            Err(DiracError::IllConditioned { .. })
        ));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = ComplexMatrix::zeros(4).exp().unwrap();
        assert_eq!(e, ComplexMatrix::identity(4));
    }

    #[test]
    fn exp_of_diagonal_matches_scalar_exp() {
        let d = ComplexMatrix::diagonal(&[c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 25.0), c(10.0, 0.0)])
            .unwrap();
        let e = d.exp().unwrap();
        for i in 0..4 {
            let want = d[(i, i)].exp();
            assert!((e[(i, i)] - want).norm() <= 1e-12 * want.norm());
        }
    }

    #[test]
    fn exp_rejects_nan() {
        let mut a = ComplexMatrix::zeros(2);
        a[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(a.exp(), Err(DiracError::Domain(_))));
    }

    #[test]
    fn exp_agrees_with_eigen_route_on_hermitian_generators() {
        // exp(iA) by Padé against exp(iA) by spectral decomposition.
        let a = &sample4() + &sample4().adjoint();
        for s in [0.1, 1.0, 3.0, 7.5] {
            let pade = a.scale(c(0.0, s)).exp().unwrap();
            let spectral = a.exp_i_hermitian(s).unwrap();
            assert!(
                pade.max_abs_diff(&spectral) < 1e-12,
                "s = {s}: {}",
                pade.max_abs_diff(&spectral)
            );
        }
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let a = &sample4() + &sample4().adjoint();
        let (vals, vecs) = a.hermitian_eigen().unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let d =
            ComplexMatrix::diagonal(&vals.iter().map(|&v| c(v, 0.0)).collect::<Vec<_>>()).unwrap();
        let recon = &(&vecs * &d) * &vecs.adjoint();
        assert!(recon.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn non_hermitian_eigen_is_rejected() {
        assert!(sample4().hermitian_eigen().is_err());
    }

    #[test]
    fn blocks_round_trip() {
        let a = sample4();
        let re = ComplexMatrix::from_blocks(
            &a.block(0, 0),
            &a.block(0, 1),
            &a.block(1, 0),
            &a.block(1, 1),
        )
        .unwrap();
        assert_eq!(re, a);
    }
}
