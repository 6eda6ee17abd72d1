//! Records of individual identity checks.

use serde::Serialize;

use crate::matrix::ComplexMatrix;

/// Tag used in place of an equation label for checks on infrastructure.
pub const PLUMBING: &str = "plumbing";

/// A value appearing in a check: scalar, vector, matrix or free text.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CheckValue {
    Scalar(f64),
    Vector(Vec<f64>),
    Matrix(ComplexMatrix),
    Text(String),
}

impl From<f64> for CheckValue {
    fn from(v: f64) -> Self {
        CheckValue::Scalar(v)
    }
}

impl From<[f64; 3]> for CheckValue {
    fn from(v: [f64; 3]) -> Self {
        CheckValue::Vector(v.to_vec())
    }
}

impl From<Vec<f64>> for CheckValue {
    fn from(v: Vec<f64>) -> Self {
        CheckValue::Vector(v)
    }
}

impl From<ComplexMatrix> for CheckValue {
    fn from(m: ComplexMatrix) -> Self {
        CheckValue::Matrix(m)
    }
}

impl From<&str> for CheckValue {
    fn from(s: &str) -> Self {
        CheckValue::Text(s.to_owned())
    }
}

impl From<String> for CheckValue {
    fn from(s: String) -> Self {
        CheckValue::Text(s)
    }
}

/// One checked identity.
///
/// `abs_err` is the comparison metric (max entrywise modulus for matrices),
/// `rel_err` is `abs_err` divided by the scale of the claimed value (or
/// `abs_err` itself when that scale is zero). `pass` is decided against
/// `tolerance` by whichever of the two the check declares in `notes`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub claim_id: String,
    pub paper_eq: String,
    pub quote: String,
    pub claimed: CheckValue,
    pub computed: CheckValue,
    pub oracle: Option<CheckValue>,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: String,
}

/// How a check compares its error to its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorMode {
    Absolute,
    Relative,
}

impl CheckRecord {
    /// Starts a record; the caller fills in values with the builder methods
    /// and finishes with one of the `judge_*` methods.
    pub fn new(
        claim_id: impl Into<String>,
        eq: impl Into<String>,
        quote: impl Into<String>,
    ) -> Self {
        CheckRecord {
            claim_id: claim_id.into(),
            paper_eq: eq.into(),
            quote: quote.into(),
            claimed: CheckValue::Text(String::new()),
            computed: CheckValue::Text(String::new()),
            oracle: None,
            abs_err: 0.0,
            rel_err: 0.0,
            tolerance: 0.0,
            pass: false,
            notes: String::new(),
        }
    }

    pub fn plumbing(claim_id: impl Into<String>) -> Self {
        Self::new(claim_id, PLUMBING, PLUMBING)
    }

    pub fn claimed(mut self, v: impl Into<CheckValue>) -> Self {
        self.claimed = v.into();
        self
    }

    pub fn computed(mut self, v: impl Into<CheckValue>) -> Self {
        self.computed = v.into();
        self
    }

    pub fn oracle(mut self, v: impl Into<CheckValue>) -> Self {
        self.oracle = Some(v.into());
        self
    }

    pub fn note(mut self, n: impl AsRef<str>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(n.as_ref());
        self
    }

    /// Sets the errors from an absolute error and a reference scale, and
    /// passes iff the chosen error is within `tol`.
    pub fn judge(mut self, abs_err: f64, scale: f64, tol: f64, mode: ErrorMode) -> Self {
        self.abs_err = abs_err;
        self.rel_err = if scale > 0.0 {
            abs_err / scale
        } else {
            abs_err
        };
        self.tolerance = tol;
        let err = match mode {
            ErrorMode::Absolute => self.abs_err,
            ErrorMode::Relative => self.rel_err,
        };
        self.pass = err.is_finite() && err <= tol;
        self
    }

    /// For aggregates where the largest absolute and relative errors come
    /// from different samples.
    pub fn judge_with(mut self, abs_err: f64, rel_err: f64, tol: f64, mode: ErrorMode) -> Self {
        self.abs_err = abs_err;
        self.rel_err = rel_err;
        self.tolerance = tol;
        let err = match mode {
            ErrorMode::Absolute => abs_err,
            ErrorMode::Relative => rel_err,
        };
        self.pass = err.is_finite() && err <= tol;
        self
    }

    pub fn judge_abs(self, abs_err: f64, scale: f64, tol: f64) -> Self {
        self.judge(abs_err, scale, tol, ErrorMode::Absolute)
    }

    pub fn judge_rel(self, abs_err: f64, scale: f64, tol: f64) -> Self {
        self.judge(abs_err, scale, tol, ErrorMode::Relative)
    }

    /// For boolean claims: pass iff `ok`.
    pub fn judge_flag(mut self, ok: bool) -> Self {
        self.abs_err = if ok { 0.0 } else { 1.0 };
        self.rel_err = self.abs_err;
        self.tolerance = 0.0;
        self.pass = ok;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn judge_uses_requested_mode() {
        let r = CheckRecord::plumbing("x").judge_rel(2e-3, 1e3, 1e-5);
        assert!(r.pass);
        assert_eq!(r.rel_err, 2e-6);
        let r = CheckRecord::plumbing("x").judge_abs(2e-3, 1e3, 1e-5);
        assert!(!r.pass);
    }

    #[test]
    fn nan_never_passes() {
        assert!(
            !CheckRecord::plumbing("x")
                .judge_abs(f64::NAN, 1.0, 1.0)
                .pass
        );
    }

    #[test]
    fn zero_scale_falls_back_to_absolute() {
        let r = CheckRecord::plumbing("x").judge_rel(1e-15, 0.0, 1e-14);
        assert_eq!(r.rel_err, 1e-15);
        assert!(r.pass);
    }
}
