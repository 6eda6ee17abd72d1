//! The `zbw` and `lattice` subcommands, and the error type shared by all
//! subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use diraclab_core::clifford::Representation;
use diraclab_core::dynamics::{
    eigenspinor, fit_angular_frequency, linspace, write_trajectory_csv, zbw_trajectory, EnergySign,
    EvolutionSample, MomentumState, SpinAxis, SpinLabel,
};
use diraclab_core::lattice::{convergence_study, ConvergenceStudy, FieldPreset, OrderEstimate};
use diraclab_core::spinor::Spinor4;
use diraclab_core::{PhysicalConstants, C64};
use serde::Serialize;

use crate::config::ConfigError;
use crate::report::to_json_bytes;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Config(ConfigError(vec![msg.into()]))
    }

    fn io(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// Writes `bytes` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut f = File::create(p).map_err(CliError::io(p))?;
            f.write_all(bytes).map_err(CliError::io(p))
        }
        None => io::stdout()
            .write_all(bytes)
            .map_err(CliError::io(Path::new("<stdout>"))),
    }
}

pub fn parse_representation(s: &str) -> Result<Representation, String> {
    match s {
        "pauli-dirac" | "pauli_dirac" | "pd" => Ok(Representation::PauliDirac),
        "standard" => Ok(Representation::Standard),
        _ => Err(format!(
            "unknown representation {s:?} (expected pauli-dirac or standard)"
        )),
    }
}

pub fn parse_floats(field: &str, s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| {
            let x = x.trim();
            x.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("{field}: {x:?} is not a finite number"))
        })
        .collect()
}

pub fn parse_vec3(field: &str, s: &str) -> Result<[f64; 3], String> {
    let v = parse_floats(field, s)?;
    <[f64; 3]>::try_from(v.as_slice()).map_err(|_| {
        format!(
            "{field}: expected 3 comma-separated numbers, got {}",
            v.len()
        )
    })
}

/// Initial state for a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Eigen(EnergySign, SpinLabel),
    /// `(u₊ + u₋)/√2` with both spinors of the given spin.
    Superposition(SpinLabel),
    /// Four complex amplitudes as `re,im` pairs; normalised on use.
    Custom([C64; 4]),
}

impl std::str::FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (head, tail) = s.split_once(':').map_or((s, None), |(h, t)| (h, Some(t)));
        let spin = |t: Option<&str>| match t {
            None | Some("up") => Ok(SpinLabel::Up),
            Some("down") => Ok(SpinLabel::Down),
            Some(o) => Err(format!("state: unknown spin {o:?} (expected up or down)")),
        };
        match head {
            "plus" => Ok(StateSpec::Eigen(EnergySign::Positive, spin(tail)?)),
            "minus" => Ok(StateSpec::Eigen(EnergySign::Negative, spin(tail)?)),
            "superposition" => Ok(StateSpec::Superposition(spin(tail)?)),
            "custom" => {
                let v = parse_floats("state", tail.unwrap_or(""))?;
                if v.len() != 8 {
                    return Err(format!(
                        "state: custom needs 8 numbers (re,im × 4), got {}",
                        v.len()
                    ));
                }
                Ok(StateSpec::Custom(
                    [0, 1, 2, 3].map(|i| C64::new(v[2 * i], v[2 * i + 1])),
                ))
            }
            _ => Err(format!(
                "state: unknown kind {head:?} (expected plus, minus, superposition or custom)"
            )),
        }
    }
}

impl StateSpec {
    pub fn spinor(&self, state: &MomentumState) -> Result<Spinor4, String> {
        Ok(match *self {
            StateSpec::Eigen(sign, spin) => eigenspinor(state, sign, spin, SpinAxis::Z),
            StateSpec::Superposition(spin) => {
                let a = eigenspinor(state, EnergySign::Positive, spin, SpinAxis::Z);
                let b = eigenspinor(state, EnergySign::Negative, spin, SpinAxis::Z);
                a.add(&b)
                    .scale(C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
            }
            StateSpec::Custom(c) => Spinor4::new(c)
                .normalized()
                .map_err(|_| "state: custom spinor has zero norm".to_string())?,
        })
    }
}

/// Sample times: an explicit list or `steps` evenly spaced points.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeSpec {
    Range { t0: f64, t1: f64, steps: usize },
    List(Vec<f64>),
}

impl TimeSpec {
    pub fn times(&self) -> Result<Vec<f64>, String> {
        let ts = match self {
            TimeSpec::Range { t0, t1, steps } => {
                if !(t0.is_finite() && t1.is_finite()) || t1 <= t0 {
                    return Err(format!("t1: must exceed t0 ({t0} .. {t1})"));
                }
                if *steps < 2 {
                    return Err(format!("steps: need at least 2, got {steps}"));
                }
                linspace(*t0, *t1, *steps)
            }
            TimeSpec::List(v) => v.clone(),
        };
        if let Some(w) = ts.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(format!(
                "times: must be strictly increasing ({} then {})",
                w[0], w[1]
            ));
        }
        Ok(ts)
    }
}

pub struct ZbwRequest {
    pub p: [f64; 3],
    pub state: StateSpec,
    pub times: TimeSpec,
    pub rep: Representation,
    pub out: Option<PathBuf>,
}

pub struct ZbwOutcome {
    pub samples: Vec<EvolutionSample>,
    /// `2E/ħ`.
    pub expected_frequency: f64,
    pub fitted_frequency: Option<f64>,
    pub fit_axis: Option<usize>,
}

impl ZbwOutcome {
    pub fn summary_line(&self) -> String {
        match (self.fitted_frequency, self.fit_axis) {
            (Some(w), Some(a)) => format!(
                "{} samples; fitted omega {w:.9e} on axis {} vs 2E/hbar {:.9e} (relative deviation {:.3e})",
                self.samples.len(),
                ["x", "y", "z"][a],
                self.expected_frequency,
                (w - self.expected_frequency).abs() / self.expected_frequency
            ),
            _ => format!(
                "{} samples; no oscillation to fit; 2E/hbar {:.9e}",
                self.samples.len(),
                self.expected_frequency
            ),
        }
    }
}

/// Below this amplitude the trembling part counts as absent.
const QUIET: f64 = 1e-10;

pub fn cmd_zbw(constants: PhysicalConstants, req: &ZbwRequest) -> Result<ZbwOutcome, CliError> {
    let state = MomentumState::new(req.p, constants, req.rep)
        .map_err(|e| CliError::invalid(format!("p: {e}")))?;
    let psi = req.state.spinor(&state).map_err(CliError::invalid)?;
    let times = req.times.times().map_err(CliError::invalid)?;
    let samples = zbw_trajectory(&state, &psi, &times)
        .map_err(|e| CliError::invalid(format!("times: {e}")))?;

    let mut csv = Vec::new();
    write_trajectory_csv(&mut csv, &samples).expect("writing to memory");
    match &req.out {
        Some(p) => {
            let f = File::create(p).map_err(CliError::io(p))?;
            let mut w = BufWriter::new(f);
            w.write_all(&csv)
                .and_then(|_| w.flush())
                .map_err(CliError::io(p))?;
        }
        None => emit(None, &csv)?,
    }

    let expected = 2.0 * state.energy() / constants.hbar();
    let (mut fitted, mut fit_axis) = (None, None);
    let dt = times[1] - times[0];
    let uniform = times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.abs().max(1e-300));
    let amp = |a: usize| samples.iter().map(|s| s.zbw[a].abs()).fold(0.0, f64::max);
    let axis = (0..3).max_by(|&a, &b| amp(a).total_cmp(&amp(b))).unwrap();
    if uniform && amp(axis) > QUIET {
        let signal: Vec<f64> = samples.iter().map(|s| s.zbw[axis]).collect();
        fitted = fit_angular_frequency(&signal, dt);
        fit_axis = fitted.map(|_| axis);
    }
    Ok(ZbwOutcome {
        samples,
        expected_frequency: expected,
        fitted_frequency: fitted,
        fit_axis,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub preset: String,
    pub parameters: FieldPreset,
    pub h: Vec<f64>,
    pub order: OrderEstimate,
    pub max_err: Vec<f64>,
}

impl From<ConvergenceStudy> for ConvergenceTable {
    fn from(s: ConvergenceStudy) -> Self {
        ConvergenceTable {
            preset: s.preset.name().into(),
            parameters: s.preset,
            h: s.spacings,
            order: s.order,
            max_err: s.errors,
        }
    }
}

pub fn cmd_lattice(
    constants: PhysicalConstants,
    preset: &str,
    spacings: &[f64],
    out: Option<&Path>,
) -> Result<ConvergenceTable, CliError> {
    let preset: FieldPreset = preset
        .parse()
        .map_err(|e| CliError::invalid(format!("preset: {e}")))?;
    if spacings.len() < 3 {
        return Err(CliError::invalid(format!(
            "h: need at least 3 spacings, got {}",
            spacings.len()
        )));
    }
    let study = convergence_study(preset, spacings, &constants)
        .map_err(|e| CliError::invalid(format!("h: {e}")))?;
    let table = ConvergenceTable::from(study);
    emit(out, &to_json_bytes(&table))?;
    Ok(table)
}
