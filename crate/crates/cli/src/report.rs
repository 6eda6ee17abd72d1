use std::io::{self, Write};

use diraclab_core::check::CheckRecord;
use diraclab_core::lattice::SIGN_CONVENTION;
use diraclab_core::PhysicalConstants;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::config::{RunConfig, Suite, Tolerances};
use crate::suites::{self, Unchecked};

pub const TOOL_VERSION: &str = concat!("diraclab ", env!("CARGO_PKG_VERSION"));

/// Conventions fixed by this tool where the model leaves a choice open.
pub const CONVENTIONS: [&str; 5] = [
    SIGN_CONVENTION,
    "p_o on the lattice is the static reading (e/C)*phi",
    "self-field curl contracts eps_jkl with alpha_k alpha_l; potential operators are (mC^2/-e)alpha_l and (mC^2/-e)I",
    "cylindrical component equation 2 uses -d(psi_4)/dz; the typeset + sign is reported separately",
    "the trembling term is (iC*hbar/2) eta H^-1 (exp(-2iHt/hbar) - I); fitted constants are reported",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub not_machine_checkable: Vec<Unchecked>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub constants_used: PhysicalConstants,
    pub tolerances: Tolerances,
    pub suites: Vec<Suite>,
    pub seed: u64,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub tamper_beta: bool,
    pub conventions: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Vec<u8> {
        to_json_bytes(self)
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(
            w,
            "{TOOL_VERSION}  seed {}  suites {}",
            self.seed,
            join(&self.suites)
        )?;
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            writeln!(
                w,
                "{tag}  {:<48} abs {:>10.3e}  rel {:>10.3e}  tol {:.1e}",
                c.claim_id, c.abs_err, c.rel_err, c.tolerance
            )?;
        }
        for u in &self.summary.not_machine_checkable {
            writeln!(w, "N/A   {} ({})", u.label, u.suite)?;
        }
        writeln!(
            w,
            "{} checks: {} passed, {} failed, {} not machine-checkable",
            self.summary.total,
            self.summary.passed,
            self.summary.failed,
            self.summary.not_machine_checkable.len()
        )
    }
}

fn join(suites: &[Suite]) -> String {
    suites
        .iter()
        .map(|s| s.name())
        .collect::<Vec<_>>()
        .join(",")
}

/// Runs the selected suites concurrently and merges their checks sorted by
/// claim id.
pub fn run_suite(cfg: &RunConfig) -> VerificationReport {
    let outputs: Vec<_> = cfg
        .suites
        .par_iter()
        .map(|&s| suites::run(s, cfg))
        .collect();
    let mut checks = Vec::new();
    let mut unchecked = Vec::new();
    for o in outputs {
        checks.extend(o.checks);
        unchecked.extend(o.unchecked);
    }
    checks.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    let passed = checks.iter().filter(|c| c.pass).count();
    VerificationReport {
        tool_version: TOOL_VERSION.into(),
        constants_used: cfg.constants,
        tolerances: cfg.tolerances,
        suites: cfg.suites.clone(),
        seed: cfg.seed,
        tamper_beta: cfg.tamper_beta,
        conventions: CONVENTIONS.iter().map(|s| s.to_string()).collect(),
        summary: Summary {
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
            not_machine_checkable: unchecked,
        },
        checks,
    }
}

/// Pretty JSON with every float written to 17 significant digits.
pub fn to_json_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, RoundTrip::default());
    value
        .serialize(&mut ser)
        .expect("report types always serialize");
    out.push(b'\n');
    out
}

#[derive(Default)]
struct RoundTrip(PrettyFormatter<'static>);

impl Formatter for RoundTrip {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}
