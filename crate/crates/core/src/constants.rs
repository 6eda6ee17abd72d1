//! Scale parameters of the model.

use serde::{Deserialize, Serialize};

use crate::error::{DiracError, Result};

/// CODATA 2018 inverse fine-structure constant.
pub const INVERSE_FINE_STRUCTURE: f64 = 137.035_999_084;

/// `ħ`, `C`, `m` and `e` plus the derived ratio `e²/(ħC)`.
///
/// `alpha` is recomputed from the other four on every construction and
/// cannot be set independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    hbar: f64,
    c: f64,
    mass: f64,
    charge: f64,
    alpha: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, c: f64, mass: f64, charge: f64) -> Result<Self> {
        let mut problems = Vec::new();
        for (name, v) in [("hbar", hbar), ("c", c), ("mass", mass), ("charge", charge)] {
            if !(v.is_finite() && v > 0.0) {
                problems.push(format!(
                    "{name} must be finite and strictly positive (got {v})"
                ));
            }
        }
        if !problems.is_empty() {
            return Err(DiracError::Domain(problems.join("; ")));
        }
        Ok(PhysicalConstants {
            hbar,
            c,
            mass,
            charge,
            alpha: charge * charge / (hbar * c),
        })
    }

    /// `ħ = C = m = e = 1`.
    pub fn unit() -> Self {
        Self::new(1.0, 1.0, 1.0, 1.0).expect("unit constants are valid")
    }

    /// Natural units `ħ = C = m = 1` with `e = √(1/137.035999084)` so that
    /// `alpha` takes its physical value.
    pub fn natural() -> Self {
        Self::new(1.0, 1.0, 1.0, (1.0 / INVERSE_FINE_STRUCTURE).sqrt())
            .expect("natural constants are valid")
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn charge(&self) -> f64 {
        self.charge
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Rest energy `mC²`.
    pub fn rest_energy(&self) -> f64 {
        self.mass * self.c * self.c
    }

    pub fn with_hbar(self, hbar: f64) -> Result<Self> {
        Self::new(hbar, self.c, self.mass, self.charge)
    }
    pub fn with_c(self, c: f64) -> Result<Self> {
        Self::new(self.hbar, c, self.mass, self.charge)
    }
    pub fn with_mass(self, mass: f64) -> Result<Self> {
        Self::new(self.hbar, self.c, mass, self.charge)
    }
    pub fn with_charge(self, charge: f64) -> Result<Self> {
        Self::new(self.hbar, self.c, self.mass, charge)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::natural()
    }
}

#[derive(Deserialize)]
struct RawConstants {
    hbar: f64,
    c: f64,
    mass: f64,
    charge: f64,
}

impl<'de> Deserialize<'de> for PhysicalConstants {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawConstants::deserialize(d)?;
        PhysicalConstants::new(raw.hbar, raw.c, raw.mass, raw.charge)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_is_recomputed() {
        let k = PhysicalConstants::new(2.0, 3.0, 1.0, 6.0).unwrap();
        assert_eq!(k.alpha(), 36.0 / 6.0);
        let k2 = k.with_charge(12.0).unwrap();
        assert_eq!(k2.alpha(), 144.0 / 6.0);
    }

    #[test]
    fn rejects_non_positive() {
        let err = PhysicalConstants::new(0.0, -1.0, 1.0, f64::NAN).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("hbar") && msg.contains("c must") && msg.contains("charge"));
    }

    #[test]
    fn natural_alpha_is_physical() {
        let k = PhysicalConstants::natural();
        assert!((k.alpha() - 1.0 / INVERSE_FINE_STRUCTURE).abs() < 1e-18);
    }
}
