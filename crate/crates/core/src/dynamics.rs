//! Fixed-momentum Dirac dynamics and Zitterbewegung.
//!
//! Within one momentum sector every operator is a 4×4 matrix. The position
//! operator evolves as
//!
//! ```text
//! r_j(t) = a_j + t C² p_j H⁻¹ + (iCħ/2) η_j H⁻¹ (exp(−2iHt/ħ) − I)
//! ```
//!
//! with `η_j = α_j − C p_j H⁻¹` and `a_j = 0`. The closed form evaluates the
//! exponential through the spectral projectors `P± = (I ± H/E)/2`; the
//! oracle conjugates `α_j` with a Padé exponential of `−iHt/ħ`. Agreement of
//! the two is the checkable content of the Heisenberg equation of motion.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::clifford::{alpha, beta, standard_from_pauli_dirac, Representation};
use crate::constants::PhysicalConstants;
use crate::error::{DiracError, Result};
use crate::matrix::ComplexMatrix;
use crate::spinor::{spin_coherent_state, spin_coherent_state_opposite, Spinor4};
use crate::C64;

/// Bound on the imaginary part of a trajectory expectation.
pub const IMAG_TOL: f64 = 1e-10;

/// Momentum sector of the free electron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumState {
    pub p: [f64; 3],
    pub constants: PhysicalConstants,
    pub rep: Representation,
}

impl MomentumState {
    pub fn new(p: [f64; 3], constants: PhysicalConstants, rep: Representation) -> Result<Self> {
        if !p.iter().all(|x| x.is_finite()) {
            return Err(DiracError::domain("momentum components must be finite"));
        }
        Ok(MomentumState { p, constants, rep })
    }

    /// `E_p = √(C²|p|² + m²C⁴)`.
    pub fn energy(&self) -> f64 {
        let c = self.constants.c();
        let p2: f64 = self.p.iter().map(|x| x * x).sum();
        let mc2 = self.constants.rest_energy();
        (c * c * p2 + mc2 * mc2).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergySign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinLabel {
    Up,
    Down,
}

/// Spin quantisation direction as polar angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinAxis {
    pub theta: f64,
    pub phi: f64,
}

impl SpinAxis {
    pub const Z: SpinAxis = SpinAxis {
        theta: 0.0,
        phi: 0.0,
    };
}

impl Default for SpinAxis {
    fn default() -> Self {
        SpinAxis::Z
    }
}

/// `H = C Σ_j α_j p_j + mC² β`.
pub fn hamiltonian(state: &MomentumState) -> ComplexMatrix {
    let k = &state.constants;
    let mut h = beta(state.rep).scale_real(k.rest_energy());
    for (j, pj) in state.p.iter().enumerate() {
        h = &h + &alpha(j + 1, state.rep).unwrap().scale_real(k.c() * pj);
    }
    h
}

/// Ascending eigenvalues of the Hamiltonian.
pub fn spectrum(state: &MomentumState) -> Result<[f64; 4]> {
    let v = hamiltonian(state).hermitian_eigenvalues()?;
    Ok([v[0], v[1], v[2], v[3]])
}

/// Counts eigenvalues within `rel_tol·E` of `−E` and of `+E`.
pub fn degeneracy(spec: &[f64; 4], energy: f64, rel_tol: f64) -> (usize, usize) {
    let near = |target: f64| {
        spec.iter()
            .filter(|&&e| (e - target).abs() <= rel_tol * energy)
            .count()
    };
    (near(-energy), near(energy))
}

/// Normalised eigenvector of `H(p)` with the requested energy sign, spin
/// along `axis`. Built by projecting a rest-frame seed with
/// `P± = (I ± H/E)/2`; the first non-negligible component is made real and
/// positive.
pub fn eigenspinor(
    state: &MomentumState,
    sign: EnergySign,
    spin: SpinLabel,
    axis: SpinAxis,
) -> Spinor4 {
    let chi = match spin {
        SpinLabel::Up => spin_coherent_state(axis.theta, axis.phi),
        SpinLabel::Down => spin_coherent_state_opposite(axis.theta, axis.phi),
    };
    let zero = C64::new(0.0, 0.0);
    let seed_pd = match sign {
        EnergySign::Positive => [chi[0], chi[1], zero, zero],
        EnergySign::Negative => [zero, zero, chi[0], chi[1]],
    };
    let seed = match state.rep {
        Representation::PauliDirac => seed_pd.to_vec(),
        Representation::Standard => standard_from_pauli_dirac().apply(&seed_pd),
    };
    let s = match sign {
        EnergySign::Positive => 1.0,
        EnergySign::Negative => -1.0,
    };
    let proj = projector(state, s);
    let v = proj.apply(&seed);
    Spinor4::new([v[0], v[1], v[2], v[3]])
        .normalized()
        .expect("projected seed is never zero for m > 0")
        .with_canonical_phase()
}

/// `(I + s·H/E)/2`.
fn projector(state: &MomentumState, s: f64) -> ComplexMatrix {
    let e = state.energy();
    let h = hamiltonian(state).scale_real(s / e);
    (&ComplexMatrix::identity(4) + &h).scale_real(0.5)
}

/// Equal superposition of the positive- and negative-energy spin-up
/// eigenspinors.
pub fn maximal_mixing_state(state: &MomentumState) -> Spinor4 {
    let up = eigenspinor(state, EnergySign::Positive, SpinLabel::Up, SpinAxis::Z);
    let down = eigenspinor(state, EnergySign::Negative, SpinLabel::Up, SpinAxis::Z);
    up.add(&down)
        .normalized()
        .expect("orthogonal eigenspinors have a non-zero sum")
}

/// `C α_j`.
pub fn velocity_operator(
    axis: usize,
    constants: &PhysicalConstants,
    rep: Representation,
) -> Result<ComplexMatrix> {
    Ok(alpha(axis, rep)?.scale_real(constants.c()))
}

/// `η_j = α_j − C p_j H⁻¹`.
pub fn eta_matrix(state: &MomentumState, axis: usize) -> Result<ComplexMatrix> {
    let a = alpha(axis, state.rep)?;
    let h_inv = hamiltonian(state).inverse()?;
    Ok(&a - &h_inv.scale_real(state.constants.c() * state.p[axis - 1]))
}

/// Heisenberg-picture `α_j(t) = U† α_j U` with `U = exp(−iHt/ħ)`.
pub fn alpha_evolved_oracle(state: &MomentumState, axis: usize, t: f64) -> Result<ComplexMatrix> {
    let u = evolution_operator(state, t)?;
    let a = alpha(axis, state.rep)?;
    Ok(&(&u.adjoint() * &a) * &u)
}

/// `exp(−iHt/ħ)` by Padé scaling-and-squaring.
pub fn evolution_operator(state: &MomentumState, t: f64) -> Result<ComplexMatrix> {
    hamiltonian(state)
        .scale(C64::new(0.0, -t / state.constants.hbar()))
        .exp()
}

/// Drift and oscillatory parts of `r_j(t)` with `a_j = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZbwMatrices {
    pub drift: ComplexMatrix,
    pub zbw: ComplexMatrix,
}

impl ZbwMatrices {
    pub fn total(&self) -> ComplexMatrix {
        &self.drift + &self.zbw
    }
}

/// Closed form of the position operator at time `t`.
pub fn zbw_closed_form(state: &MomentumState, axis: usize, t: f64) -> Result<ZbwMatrices> {
    let k = &state.constants;
    let (c, hbar) = (k.c(), k.hbar());
    let h_inv = hamiltonian(state).inverse()?;
    let drift = h_inv.scale_real(t * c * c * state.p[axis - 1]);
    let eta = eta_matrix(state, axis)?;
    let e = state.energy();
    let osc = &(&projector(state, 1.0).scale(C64::from_polar(1.0, -2.0 * e * t / hbar))
        + &projector(state, -1.0).scale(C64::from_polar(1.0, 2.0 * e * t / hbar)))
        - &ComplexMatrix::identity(4);
    let zbw = (&(&eta * &h_inv) * &osc).scale(C64::new(0.0, 0.5 * c * hbar));
    Ok(ZbwMatrices { drift, zbw })
}

/// One time slice of a trajectory; `total = drift + zbw`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolutionSample {
    pub t: f64,
    pub drift: [f64; 3],
    pub zbw: [f64; 3],
    pub total: [f64; 3],
}

/// Expectation values of the drift and oscillatory position parts along a
/// strictly increasing list of times.
pub fn zbw_trajectory(
    state: &MomentumState,
    psi: &Spinor4,
    times: &[f64],
) -> Result<Vec<EvolutionSample>> {
    psi.ensure_normalized()?;
    if let Some(i) = times.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(DiracError::domain(format!(
            "times must be strictly increasing (index {} -> {})",
            i,
            i + 1
        )));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(DiracError::domain(format!("non-finite time {t}")));
    }
    times
        .par_iter()
        .map(|&t| {
            let mut drift = [0.0; 3];
            let mut zbw = [0.0; 3];
            for axis in 1..=3 {
                let m = zbw_closed_form(state, axis, t)?;
                let d = m.drift.expectation(psi.as_slice());
                let z = m.zbw.expectation(psi.as_slice());
                let scale = 1.0 + z.re.abs() + d.re.abs();
                if d.im.abs() > IMAG_TOL * scale || z.im.abs() > IMAG_TOL * scale {
                    return Err(DiracError::Numeric(format!(
                        "position expectation has imaginary part {:e} at t = {t}",
                        d.im.abs().max(z.im.abs())
                    )));
                }
                drift[axis - 1] = d.re;
                zbw[axis - 1] = z.re;
            }
            let total = [0, 1, 2].map(|i| drift[i] + zbw[i]);
            Ok(EvolutionSample {
                t,
                drift,
                zbw,
                total,
            })
        })
        .collect()
}

/// `n` equally spaced times from `t0` to `t1` inclusive.
pub fn linspace(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![t0],
        _ => (0..n)
            .map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Column header of the trajectory CSV.
pub const TRAJECTORY_HEADER: &str =
    "t,drift_x,drift_y,drift_z,zbw_x,zbw_y,zbw_z,total_x,total_y,total_z";

/// Writes one header line and one row per sample, values in `{:.14e}`.
pub fn write_trajectory_csv<W: std::io::Write>(
    mut w: W,
    samples: &[EvolutionSample],
) -> std::io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for s in samples {
        write!(w, "{:.14e}", s.t)?;
        for v in s.drift.iter().chain(&s.zbw).chain(&s.total) {
            write!(w, ",{v:.14e}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

/// Ordinary least-squares line through `(xs, ys)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0, f64::max);
    LinearFit {
        slope,
        intercept,
        max_residual,
    }
}

/// Dominant angular frequency of a uniformly sampled real signal.
///
/// The zero-padded FFT locates the peak; a least-squares sinusoid fit
/// (with offset) then refines it by golden-section search across the main
/// lobe. Returns `None` for constant signals.
pub fn fit_angular_frequency(signal: &[f64], dt: f64) -> Option<f64> {
    let n = signal.len();
    if n < 4 || !(dt > 0.0) {
        return None;
    }
    let mean = signal.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = signal.iter().map(|v| v - mean).collect();
    let peak = centered.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if !(peak > 1e-300) {
        return None;
    }
    let padded_len = (8 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = centered
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(padded_len)
        .collect();
    FftPlanner::new()
        .plan_fft_forward(padded_len)
        .process(&mut buf);
    let (k_peak, _) = buf[1..padded_len / 2]
        .iter()
        .enumerate()
        .map(|(i, z)| (i + 1, z.norm_sqr()))
        .fold((1, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let bin = 2.0 * PI / (padded_len as f64 * dt);
    let coarse = k_peak as f64 * bin;
    let lobe = 2.0 * PI / (n as f64 * dt);
    let lo = (coarse - 0.5 * lobe).max(0.25 * bin);
    let hi = coarse + 0.5 * lobe;
    let power = |w: f64| sinusoid_power(&centered, dt, w);
    Some(golden_max(power, lo, hi, 80))
}

/// Energy of the least-squares projection of `y` onto
/// `{1, cos ωt, sin ωt}`.
fn sinusoid_power(y: &[f64], dt: f64, w: f64) -> f64 {
    let mut g = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for (i, &v) in y.iter().enumerate() {
        let (s, c) = (w * dt * i as f64).sin_cos();
        let f = [1.0, c, s];
        for r in 0..3 {
            b[r] += f[r] * v;
            for q in 0..3 {
                g[r][q] += f[r] * f[q];
            }
        }
    }
    match solve3(g, b) {
        Some(x) => x.iter().zip(&b).map(|(a, c)| a * c).sum(),
        None => 0.0,
    }
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..3 {
            let f = a[r][col] / a[col][col];
            for q in col..3 {
                a[r][q] -= f * a[col][q];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = ((r + 1)..3).map(|q| a[r][q] * x[q]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZbwCharacteristics {
    /// `2E_p/ħ`.
    pub angular_frequency: f64,
    /// Largest half peak-to-peak excursion of the oscillatory part over the
    /// three axes, for the maximal-mixing state.
    pub amplitude_scale: f64,
    /// Frequency recovered from the sampled trajectory.
    pub fitted_frequency: f64,
}

/// Samples per trajectory used by [`zbw_characteristics`].
pub const CHARACTERISTIC_SAMPLES: usize = 10_000;

/// Frequency and amplitude of the trembling motion. The trajectory spans
/// 200 nominal periods at 50 samples per period.
pub fn zbw_characteristics(state: &MomentumState) -> Result<ZbwCharacteristics> {
    let omega = 2.0 * state.energy() / state.constants.hbar();
    let period = 2.0 * PI / omega;
    let n = CHARACTERISTIC_SAMPLES;
    let dt = 200.0 * period / n as f64;
    let times: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
    let psi = maximal_mixing_state(state);
    let traj = zbw_trajectory(state, &psi, &times)?;
    let mut best_axis = 0;
    let mut amplitude = 0.0;
    for axis in 0..3 {
        let (lo, hi) = traj.iter().fold((f64::MAX, f64::MIN), |(lo, hi), s| {
            (lo.min(s.zbw[axis]), hi.max(s.zbw[axis]))
        });
        let a = 0.5 * (hi - lo);
        if a > amplitude {
            amplitude = a;
            best_axis = axis;
        }
    }
    let signal: Vec<f64> = traj.iter().map(|s| s.zbw[best_axis]).collect();
    let fitted = fit_angular_frequency(&signal, dt)
        .ok_or_else(|| DiracError::Numeric("trajectory has no oscillation to fit".into()))?;
    Ok(ZbwCharacteristics {
        angular_frequency: omega,
        amplitude_scale: amplitude,
        fitted_frequency: fitted,
    })
}

/// Best-fit constants of the template `κ·Cħ·H⁻¹ η_j(0) exp(s·2iHt/ħ)`
/// against the oracle's oscillatory position part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationTemplateFit {
    /// `+1` or `−1`.
    pub exponent_sign: i8,
    /// `κ`, the prefactor in units of `Cħ`.
    pub prefactor: C64,
    /// Largest entrywise deviation of the fitted template over the samples.
    pub max_residual: f64,
    /// The same deviation for the other exponent sign.
    pub rejected_residual: f64,
}

/// Fits the template constants from the oracle. The oscillatory position
/// part is rebuilt from the conjugated `α_j(t)` as
/// `(iCħ/2)(α_j(t) − C p_j H⁻¹) H⁻¹`, whose time derivative is
/// `C(α_j(t) − C p_j H⁻¹)` because `η` anticommutes with `H`.
pub fn fit_oscillation_template(
    state: &MomentumState,
    axis: usize,
    times: &[f64],
) -> Result<OscillationTemplateFit> {
    let k = &state.constants;
    let (c, hbar) = (k.c(), k.hbar());
    let h = hamiltonian(state);
    let h_inv = h.inverse()?;
    let eta0 = eta_matrix(state, axis)?;
    let steady = h_inv.scale_real(c * state.p[axis - 1]);
    let mut targets = Vec::with_capacity(times.len());
    for &t in times {
        let eta_t = &alpha_evolved_oracle(state, axis, t)? - &steady;
        targets.push((&eta_t * &h_inv).scale(C64::new(0.0, 0.5 * c * hbar)));
    }
    let mut fits = Vec::new();
    for s in [1i8, -1] {
        let base = (&h_inv * &eta0).scale_real(c * hbar);
        let templates: Vec<ComplexMatrix> = times
            .iter()
            .map(|&t| {
                h.exp_i_hermitian(2.0 * s as f64 * t / hbar)
                    .map(|e| &base * &e)
            })
            .collect::<Result<_>>()?;
        let mut num = C64::new(0.0, 0.0);
        let mut den = 0.0;
        for (tm, tg) in templates.iter().zip(&targets) {
            for (a, b) in tm.entries().iter().zip(tg.entries()) {
                num += a.conj() * b;
                den += a.norm_sqr();
            }
        }
        let kappa = if den > 0.0 {
            num / den
        } else {
            C64::new(0.0, 0.0)
        };
        let resid = templates
            .iter()
            .zip(&targets)
            .map(|(tm, tg)| tm.scale(kappa).max_abs_diff(tg))
            .fold(0.0, f64::max);
        fits.push((s, kappa, resid));
    }
    fits.sort_by(|a, b| a.2.total_cmp(&b.2));
    Ok(OscillationTemplateFit {
        exponent_sign: fits[0].0,
        prefactor: fits[0].1,
        max_residual: fits[0].2,
        rejected_residual: fits[1].2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_state(p: [f64; 3]) -> MomentumState {
        MomentumState::new(p, PhysicalConstants::unit(), Representation::PauliDirac).unwrap()
    }

    #[test]
    fn rest_hamiltonian_is_scaled_beta() {
        let k = PhysicalConstants::new(1.0, 2.0, 3.0, 1.0).unwrap();
        let s = MomentumState::new([0.0; 3], k, Representation::PauliDirac).unwrap();
        assert_eq!(
            hamiltonian(&s),
            beta(Representation::PauliDirac).scale_real(12.0)
        );
    }

    #[test]
    fn boosted_spectrum() {
        let s = unit_state([0.0, 0.0, 1.0]);
        let h = hamiltonian(&s);
        let want =
            &alpha(3, Representation::PauliDirac).unwrap() + &beta(Representation::PauliDirac);
        assert_eq!(h, want);
        let r2 = 2f64.sqrt();
        let spec = spectrum(&s).unwrap();
        for (got, want) in spec.iter().zip([-r2, -r2, r2, r2]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(h.is_hermitian(1e-14));
    }

    #[test]
    fn three_four_five() {
        let k = PhysicalConstants::new(1.0, 1.0, 4.0, 1.0).unwrap();
        let s = MomentumState::new([0.0, 3.0, 0.0], k, Representation::Standard).unwrap();
        let spec = spectrum(&s).unwrap();
        assert_eq!(degeneracy(&spec, 5.0, 1e-12), (2, 2));
    }

    #[test]
    fn rest_eigenspinors() {
        let s = unit_state([0.0; 3]);
        let up = eigenspinor(&s, EnergySign::Positive, SpinLabel::Up, SpinAxis::Z);
        assert_eq!(up, Spinor4::from_real([1.0, 0.0, 0.0, 0.0]));
        let neg = eigenspinor(&s, EnergySign::Negative, SpinLabel::Up, SpinAxis::Z);
        assert_eq!(neg, Spinor4::from_real([0.0, 0.0, 1.0, 0.0]));
    }

    #[test]
    fn eigenspinors_in_both_representations() {
        for rep in Representation::ALL {
            let s = MomentumState::new([0.4, -1.2, 0.7], PhysicalConstants::unit(), rep).unwrap();
            let h = hamiltonian(&s);
            let e = s.energy();
            for (sign, ev) in [(EnergySign::Positive, e), (EnergySign::Negative, -e)] {
                for spin in [SpinLabel::Up, SpinLabel::Down] {
                    let u = eigenspinor(
                        &s,
                        sign,
                        spin,
                        SpinAxis {
                            theta: 0.9,
                            phi: 2.1,
                        },
                    );
                    let hu = h.apply(u.as_slice());
                    let err = hu
                        .iter()
                        .zip(u.as_slice())
                        .map(|(a, b)| (a - b * ev).norm())
                        .fold(0.0, f64::max);
                    assert!(err < 1e-12, "{rep:?} {sign:?} {spin:?}: {err}");
                    assert!(u.is_normalized());
                    let lead = u.components.iter().find(|z| z.norm() > 1e-14).unwrap();
                    assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
                }
            }
        }
    }

    #[test]
    fn velocity_eigenvalues_are_light_speed() {
        let k = PhysicalConstants::new(1.0, 2.5, 1.0, 1.0).unwrap();
        let v = velocity_operator(3, &k, Representation::PauliDirac).unwrap();
        let ev = v.hermitian_eigenvalues().unwrap();
        for (g, w) in ev.iter().zip([-2.5, -2.5, 2.5, 2.5]) {
            assert!((g - w).abs() < 1e-12);
        }
        let rest = unit_state([0.0; 3]);
        let u = eigenspinor(&rest, EnergySign::Positive, SpinLabel::Up, SpinAxis::Z);
        for j in 1..=3 {
            let vj = velocity_operator(j, &PhysicalConstants::unit(), Representation::PauliDirac)
                .unwrap();
            assert!(vj.expectation(u.as_slice()).norm() < 1e-15);
        }
    }

    #[test]
    fn eta_properties() {
        let rest = unit_state([0.0; 3]);
        assert!(
            eta_matrix(&rest, 2)
                .unwrap()
                .max_abs_diff(&alpha(2, Representation::PauliDirac).unwrap())
                < 1e-15
        );
        let s = unit_state([0.3, -0.8, 1.1]);
        let h = hamiltonian(&s);
        for j in 1..=3 {
            let eta = eta_matrix(&s, j).unwrap();
            let ac = &(&eta * &h) + &(&h * &eta);
            assert!(ac.max_abs() < 1e-12);
            assert!(eta.trace().norm() < 1e-12);
        }
    }

    #[test]
    fn oracle_flips_alpha_at_half_period() {
        let k = PhysicalConstants::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let s = MomentumState::new([0.0; 3], k, Representation::PauliDirac).unwrap();
        let t = PI / 2.0;
        for j in 1..=3 {
            let a = alpha(j, Representation::PauliDirac).unwrap();
            let at = alpha_evolved_oracle(&s, j, t).unwrap();
            assert!(at.max_abs_diff(&-&a) < 1e-12);
            assert!(alpha_evolved_oracle(&s, j, 0.0).unwrap().max_abs_diff(&a) < 1e-15);
        }
        let u = evolution_operator(&unit_state([0.2, 0.5, -1.0]), 3.3).unwrap();
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn closed_form_vanishes_at_zero() {
        let m = zbw_closed_form(&unit_state([0.5, 0.1, -0.3]), 1, 0.0).unwrap();
        assert!(m.drift.is_zero());
        assert!(m.zbw.max_abs() < 1e-15);
    }

    #[test]
    fn closed_form_derivative_matches_oracle() {
        let s = unit_state([0.5, -0.7, 0.2]);
        let h = 1e-5;
        for axis in 1..=3 {
            for t in [0.3, 1.7, 4.0] {
                let fwd = zbw_closed_form(&s, axis, t + h).unwrap().total();
                let bwd = zbw_closed_form(&s, axis, t - h).unwrap().total();
                let fd = (&fwd - &bwd).scale_real(0.5 / h);
                let oracle = alpha_evolved_oracle(&s, axis, t).unwrap();
                assert!(fd.max_abs_diff(&oracle) < 1e-8);
            }
        }
    }

    #[test]
    fn trajectory_rejects_bad_input() {
        let s = unit_state([0.0; 3]);
        let psi = Spinor4::from_real([1.0, 0.0, 0.0, 0.0]);
        assert!(zbw_trajectory(&s, &psi, &[0.0, 1.0, 1.0]).is_err());
        assert!(zbw_trajectory(&s, &psi, &[1.0, 0.5]).is_err());
        let unnormalized = Spinor4::from_real([1.0, 1.0, 0.0, 0.0]);
        assert!(zbw_trajectory(&s, &unnormalized, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn eigenstate_trajectory_has_no_trembling() {
        let s = unit_state([0.3, 0.4, -0.2]);
        let u = eigenspinor(&s, EnergySign::Positive, SpinLabel::Down, SpinAxis::Z);
        let traj = zbw_trajectory(&s, &u, &linspace(0.0, 10.0, 101)).unwrap();
        for smp in &traj {
            assert!(smp.zbw.iter().all(|z| z.abs() < 1e-12));
            for i in 0..3 {
                assert_eq!(smp.total[i], smp.drift[i] + smp.zbw[i]);
            }
        }
        let e = s.energy();
        let ts: Vec<f64> = traj.iter().map(|x| x.t).collect();
        let xs: Vec<f64> = traj.iter().map(|x| x.total[0]).collect();
        let fit = linear_fit(&ts, &xs);
        assert!((fit.slope - 0.3 / e).abs() < 1e-10);
        assert!(fit.max_residual < 1e-10);
    }

    #[test]
    fn rest_superposition_trembles_at_twice_rest_frequency() {
        let s = unit_state([0.0; 3]);
        let psi = maximal_mixing_state(&s);
        let traj = zbw_trajectory(&s, &psi, &linspace(0.0, PI, 2001)).unwrap();
        let amp = traj
            .iter()
            .map(|x| x.zbw.iter().map(|v| v.abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        assert!(amp > 0.1);
        // Period π at ω = 2: the oscillatory part returns to its start.
        let last = traj.last().unwrap();
        for i in 0..3 {
            assert!((last.zbw[i] - traj[0].zbw[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn characteristics_at_rest() {
        let ch = zbw_characteristics(&unit_state([0.0; 3])).unwrap();
        assert_eq!(ch.angular_frequency, 2.0);
        assert!((ch.fitted_frequency - 2.0).abs() < 0.02);
        assert!(ch.amplitude_scale > 0.0);
        let k = PhysicalConstants::new(1.0, 1.0, 2.0, 1.0).unwrap();
        let heavy = MomentumState::new([0.0; 3], k, Representation::PauliDirac).unwrap();
        assert_eq!(zbw_characteristics(&heavy).unwrap().angular_frequency, 4.0);
    }

    #[test]
    fn frequency_fit_on_short_window() {
        let w = 2.0;
        let ts = linspace(0.0, PI, 1000);
        let sig: Vec<f64> = ts.iter().map(|t| 0.3 + 0.5 * (w * t + 0.4).cos()).collect();
        let got = fit_angular_frequency(&sig, ts[1] - ts[0]).unwrap();
        assert!((got - w).abs() < 0.01 * w, "{got}");
    }

    #[test]
    fn template_fit_resolves_sign_and_prefactor() {
        let s = unit_state([0.4, 0.3, -0.6]);
        let fit = fit_oscillation_template(&s, 1, &linspace(0.0, 3.0, 13)).unwrap();
        assert_eq!(fit.exponent_sign, -1);
        assert!((fit.prefactor - C64::new(0.0, -0.5)).norm() < 1e-10);
        assert!(fit.max_residual < 1e-10);
        assert!(fit.rejected_residual > 1e-3);
    }

    #[test]
    fn csv_layout() {
        let s = unit_state([0.0; 3]);
        let traj = zbw_trajectory(&s, &maximal_mixing_state(&s), &[0.0, 0.5]).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &traj).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], TRAJECTORY_HEADER);
        assert_eq!(lines[1].split(',').count(), 10);
        assert!(lines[1].starts_with("0.00000000000000e0,"));
    }

    #[test]
    fn linear_fit_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let f = linear_fit(&xs, &ys);
        assert!((f.slope - 2.0).abs() < 1e-15 && (f.intercept - 1.0).abs() < 1e-15);
    }
}
