//! Run configuration: defaults, a flat `key = value` file, and flag
//! overrides, in increasing precedence.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use diraclab_core::PhysicalConstants;
use serde::Serialize;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "DIRACLAB_CONFIG";
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    States,
    Dynamics,
    Fields,
    Lattice,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Algebra,
        Suite::States,
        Suite::Dynamics,
        Suite::Fields,
        Suite::Lattice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::States => "states",
            Suite::Dynamics => "dynamics",
            Suite::Fields => "fields",
            Suite::Lattice => "lattice",
        }
    }

    pub fn index(self) -> u64 {
        Suite::ALL.iter().position(|s| *s == self).unwrap() as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| {
                format!(
                    "unknown suite '{}' (known: algebra, states, dynamics, fields, lattice)",
                    s.trim()
                )
            })
    }
}

/// Tolerances per check class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Exact matrix identities.
    pub algebra: f64,
    /// Eigen-solves, residuals and trajectory identities.
    pub dynamics: f64,
    /// Analytic-derivative lattice path.
    pub lattice: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebra: 1e-14,
            dynamics: 1e-12,
            lattice: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub constants: PhysicalConstants,
    pub tolerances: Tolerances,
    pub suites: Vec<Suite>,
    pub seed: u64,
    /// Negative control: corrupts one entry of the Pauli–Dirac β.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub tamper_beta: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            constants: PhysicalConstants::natural(),
            tolerances: Tolerances::default(),
            suites: Suite::ALL.to_vec(),
            seed: DEFAULT_SEED,
            tamper_beta: false,
        }
    }
}

/// One source of settings; unset fields fall through to the next layer.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub hbar: Option<f64>,
    pub c: Option<f64>,
    pub mass: Option<f64>,
    pub charge: Option<f64>,
    pub tol_algebra: Option<f64>,
    pub tol_dynamics: Option<f64>,
    pub tol_lattice: Option<f64>,
    pub seed: Option<u64>,
    pub suites: Option<Vec<Suite>>,
    pub tamper_beta: Option<bool>,
}

/// Every problem found while reading or validating a configuration.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid configuration:\n  {}", .0.join("\n  "))]
pub struct ConfigError(pub Vec<String>);

impl ConfigLayer {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str, source: &str) -> Result<Self, ConfigError> {
        let (layer, errors) = ConfigLayer::parse_lenient(text, source);
        if errors.is_empty() {
            Ok(layer)
        } else {
            Err(ConfigError(errors))
        }
    }

    /// Like [`ConfigLayer::parse`] but keeps every entry that did parse, so
    /// later validation can report its problems too.
    pub fn parse_lenient(text: &str, source: &str) -> (Self, Vec<String>) {
        let mut layer = ConfigLayer::default();
        let mut errors = Vec::new();
        let mut seen: Vec<(String, usize)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let lineno = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                errors.push(format!(
                    "{source}:{lineno}: expected 'key = value', got '{line}'"
                ));
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if let Some((_, first)) = seen.iter().find(|(k, _)| k == key) {
                errors.push(format!(
                    "{source}:{lineno}: '{key}' conflicts with the value set on line {first}"
                ));
                continue;
            }
            seen.push((key.to_owned(), lineno));
            let at = |msg: String| format!("{source}:{lineno}: {msg}");
            match key {
                "hbar" | "c" | "mass" | "charge" | "tol.algebra" | "tol.dynamics"
                | "tol.lattice" => match parse_f64(key, value) {
                    Ok(v) => *layer.float_slot(key) = Some(v),
                    Err(e) => errors.push(at(e)),
                },
                "seed" => match value.parse::<u64>() {
                    Ok(v) => layer.seed = Some(v),
                    Err(_) => errors.push(at(format!(
                        "seed: expected a non-negative integer, got '{value}'"
                    ))),
                },
                "suites" => match parse_suites(value) {
                    Ok(v) => layer.suites = Some(v),
                    Err(es) => errors.extend(es.into_iter().map(&at)),
                },
                "debug.tamper_beta" => match value {
                    "true" => layer.tamper_beta = Some(true),
                    "false" => layer.tamper_beta = Some(false),
                    _ => errors.push(at(format!(
                        "debug.tamper_beta: expected true or false, got '{value}'"
                    ))),
                },
                _ => errors.push(at(format!("unknown key '{key}'"))),
            }
        }
        (layer, errors)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        match ConfigLayer::from_file_lenient(path) {
            (layer, errors) if errors.is_empty() => Ok(layer),
            (_, errors) => Err(ConfigError(errors)),
        }
    }

    fn from_file_lenient(path: &Path) -> (Self, Vec<String>) {
        match std::fs::read_to_string(path) {
            Ok(text) => ConfigLayer::parse_lenient(&text, &path.display().to_string()),
            Err(e) => (
                ConfigLayer::default(),
                vec![format!("{}: {e}", path.display())],
            ),
        }
    }

    fn float_slot(&mut self, key: &str) -> &mut Option<f64> {
        match key {
            "hbar" => &mut self.hbar,
            "c" => &mut self.c,
            "mass" => &mut self.mass,
            "charge" => &mut self.charge,
            "tol.algebra" => &mut self.tol_algebra,
            "tol.dynamics" => &mut self.tol_dynamics,
            "tol.lattice" => &mut self.tol_lattice,
            _ => unreachable!("not a float key: {key}"),
        }
    }

    /// `self` wins where set.
    pub fn over(self, base: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            hbar: self.hbar.or(base.hbar),
            c: self.c.or(base.c),
            mass: self.mass.or(base.mass),
            charge: self.charge.or(base.charge),
            tol_algebra: self.tol_algebra.or(base.tol_algebra),
            tol_dynamics: self.tol_dynamics.or(base.tol_dynamics),
            tol_lattice: self.tol_lattice.or(base.tol_lattice),
            seed: self.seed.or(base.seed),
            suites: self.suites.or(base.suites),
            tamper_beta: self.tamper_beta.or(base.tamper_beta),
        }
    }

    /// Applies the layer to the defaults and validates the result.
    pub fn resolve(self) -> Result<RunConfig, ConfigError> {
        let d = RunConfig::default();
        let mut errors = Vec::new();
        let k = d.constants;
        let constants = PhysicalConstants::new(
            self.hbar.unwrap_or(k.hbar()),
            self.c.unwrap_or(k.c()),
            self.mass.unwrap_or(k.mass()),
            self.charge.unwrap_or(k.charge()),
        );
        let constants = match constants {
            Ok(c) => c,
            Err(e) => {
                errors.push(e.to_string());
                k
            }
        };
        let mut tol = |name: &str, v: Option<f64>, default: f64| match v {
            Some(t) if !(t > 0.0 && t.is_finite()) => {
                errors.push(format!("tol.{name}: must be strictly positive, got {t}"));
                default
            }
            Some(t) => t,
            None => default,
        };
        let tolerances = Tolerances {
            algebra: tol("algebra", self.tol_algebra, d.tolerances.algebra),
            dynamics: tol("dynamics", self.tol_dynamics, d.tolerances.dynamics),
            lattice: tol("lattice", self.tol_lattice, d.tolerances.lattice),
        };
        if errors.is_empty() {
            Ok(RunConfig {
                constants,
                tolerances,
                suites: self.suites.unwrap_or(d.suites),
                seed: self.seed.unwrap_or(d.seed),
                tamper_beta: self.tamper_beta.unwrap_or(false),
            })
        } else {
            Err(ConfigError(errors))
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, String> {
    value
        .parse::<f64>()
        .map_err(|_| format!("{key}: expected a number, got '{value}'"))
}

/// Comma-separated suite names, deduplicated into canonical order.
pub fn parse_suites(value: &str) -> Result<Vec<Suite>, Vec<String>> {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for part in value.split(',').filter(|p| !p.trim().is_empty()) {
        match part.parse::<Suite>() {
            Ok(s) => out.push(s),
            Err(e) => errors.push(e),
        }
    }
    if out.is_empty() && errors.is_empty() {
        errors.push("suites: empty list".to_owned());
    }
    out.sort();
    out.dedup();
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

/// Flags over `explicit` file (or the file named by [`CONFIG_ENV`]) over
/// defaults.
pub fn load(explicit: Option<&Path>, flags: ConfigLayer) -> Result<RunConfig, ConfigError> {
    let env_path = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty());
    let (file_layer, mut errors) = match explicit {
        Some(p) => ConfigLayer::from_file_lenient(p),
        None => env_path
            .map(|p| ConfigLayer::from_file_lenient(Path::new(&p)))
            .unwrap_or_default(),
    };
    match flags.over(file_layer).resolve() {
        Ok(cfg) if errors.is_empty() => Ok(cfg),
        Ok(_) => Err(ConfigError(errors)),
        Err(ConfigError(es)) => {
            errors.extend(es);
            Err(ConfigError(errors))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_defaults() {
        let cfg = ConfigLayer::parse("", "t").unwrap().resolve().unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.constants.hbar(), 1.0);
        assert!((cfg.constants.alpha() - 1.0 / 137.035_999_084).abs() < 1e-15);
    }

    #[test]
    fn flags_beat_file() {
        let file = ConfigLayer::parse("mass = 2\nseed = 5", "t").unwrap();
        let flags = ConfigLayer {
            mass: Some(3.0),
            ..Default::default()
        };
        let cfg = flags.over(file).resolve().unwrap();
        assert_eq!(cfg.constants.mass(), 3.0);
        assert_eq!(cfg.seed, 5);
    }

    #[test]
    fn every_problem_is_listed() {
        let err = ConfigLayer::parse(
            "tol.algebra = -1\nmass = heavy\nsuites = algebra,optics\nwhat = 1\nnope\nseed = 1\nseed = 2",
            "t",
        )
        .unwrap_err();
        assert_eq!(err.0.len(), 5, "{err}");
        let err = ConfigLayer::parse("tol.algebra = -1\nmass = -2", "t")
            .unwrap()
            .resolve()
            .unwrap_err();
        assert_eq!(err.0.len(), 2, "{err}");
        assert!(err.0.iter().any(|e| e.contains("tol.algebra")));
    }

    #[test]
    fn suites_are_canonical() {
        assert_eq!(
            parse_suites("lattice, algebra,lattice").unwrap(),
            vec![Suite::Algebra, Suite::Lattice]
        );
        assert!(parse_suites("").is_err());
    }
}
