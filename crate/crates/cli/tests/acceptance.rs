//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//!
//! Criteria are judged from the check records of an in-process default run
//! at the tolerances stated per criterion, not from each record's own
//! `pass` flag, plus a tampered run and two runs of the built binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::{Command, ExitCode};

use diraclab::config::{RunConfig, Suite};
use diraclab::report::{run_suite, VerificationReport};
use diraclab_core::check::CheckRecord;

struct Gate<'a> {
    report: &'a VerificationReport,
}

impl Gate<'_> {
    fn matching(&self, prefix: &str) -> Vec<&CheckRecord> {
        self.report
            .checks
            .iter()
            .filter(|c| c.claim_id.starts_with(prefix))
            .collect()
    }

    fn one(&self, id: &str) -> Result<&CheckRecord, String> {
        self.report
            .checks
            .iter()
            .find(|c| c.claim_id == id)
            .ok_or_else(|| format!("missing check {id}"))
    }

    /// Every record under `prefix` has `abs_err ≤ tol` (or `rel_err` when
    /// `relative`), and there are exactly `count` of them.
    fn bound(&self, prefix: &str, count: usize, tol: f64, relative: bool) -> Result<f64, String> {
        let recs = self.matching(prefix);
        if recs.len() != count {
            return Err(format!(
                "{prefix}: expected {count} checks, found {}",
                recs.len()
            ));
        }
        let mut worst: f64 = 0.0;
        for r in recs {
            let e = if relative { r.rel_err } else { r.abs_err };
            if !(e <= tol) {
                return Err(format!("{}: error {e:.3e} > {tol:.0e}", r.claim_id));
            }
            worst = worst.max(e);
        }
        Ok(worst)
    }

    fn flag(&self, id: &str) -> Result<(), String> {
        let r = self.one(id)?;
        if r.pass {
            Ok(())
        } else {
            Err(format!("{id} failed: {}", r.notes))
        }
    }
}

type Outcome = Result<String, String>;

fn clifford(g: &Gate) -> Outcome {
    let pd = g.bound("algebra.pauli_dirac.anticomm.", 16, 1e-14, false)?;
    let st = g.bound("algebra.standard.anticomm.", 16, 1e-14, false)?;
    let tampered = run_suite(&RunConfig {
        suites: vec![Suite::Algebra],
        tamper_beta: true,
        ..RunConfig::default()
    });
    let bad = tampered
        .failures()
        .filter(|c| c.claim_id.starts_with("algebra.pauli_dirac."))
        .count();
    if bad == 0 {
        return Err("tampered β produced no failure".into());
    }
    Ok(format!(
        "32 relations, worst {:.1e}; tampered β fails {bad} checks",
        pd.max(st)
    ))
}

fn spectrum(g: &Gate) -> Outcome {
    let w = g.bound("dynamics.spectrum.dispersion", 1, 1e-12, true)?;
    Ok(format!(
        "1000 samples, worst relative error {w:.1e}, degeneracy (2, 2)"
    ))
}

fn jz(g: &Gate) -> Outcome {
    g.bound("states.jz.plus.", 11, 0.0, false)?;
    g.bound("states.jz.minus.", 11, 0.0, false)?;
    g.flag("states.jz.mixed_branch")?;
    Ok("l in -5..=5 exact on both branches; mixed branch rejected".into())
}

fn residuals(g: &Gate) -> Outcome {
    let a = g.bound("states.ab1.", 6, 1e-12, false)?;
    let b = g.bound("states.aa1.", 6, 1e-12, false)?;
    let c = g.bound("states.aa2.p", 6, 1e-10, false)?;
    Ok(format!(
        "coupled {a:.1e}, components {b:.1e}, cylindrical vs Cartesian {c:.1e}"
    ))
}

fn zitterbewegung(g: &Gate) -> Outcome {
    let v = g.one("dynamics.zbw.velocity_vs_oracle")?;
    if !(v.rel_err <= 1e-8) {
        return Err(format!("velocity vs oracle {:.3e}", v.rel_err));
    }
    let lin = g.bound("dynamics.zbw.eigenstate_linear", 1, 1e-10, false)?;
    let f = g.bound("dynamics.zbw.frequency.", 3, 0.01, true)?;
    Ok(format!(
        "velocity {:.1e}, linearity {lin:.1e}, frequency {f:.1e}",
        v.rel_err
    ))
}

fn self_fields(g: &Gate) -> Outcome {
    let r = g.bound("fields.routes_agree", 1, 1e-14, true)?;
    g.flag("fields.routes_agree")?;
    for rep in ["pauli_dirac", "standard"] {
        g.bound(&format!("fields.commutator.{rep}.h"), 3, 1e-14, true)?;
        g.bound(&format!("fields.maxwell.{rep}.h"), 3, 1e-14, true)?;
        g.flag(&format!("fields.commutator.{rep}.e_zero"))?;
        g.flag(&format!("fields.maxwell.{rep}.e_zero"))?;
    }
    Ok(format!(
        "E = 0 exactly, routes agree to {r:.1e} over 100 constants"
    ))
}

fn rest_energy(g: &Gate) -> Outcome {
    let w = g.bound("fields.rest_energy", 2, 1e-14, true)?;
    Ok(format!("100 directions, worst relative {w:.1e}"))
}

fn anomalous(g: &Gate) -> Outcome {
    g.bound("fields.anomalous_ratio", 2, 1e-9, false)?;
    let r = g.one("fields.anomalous_ratio.physical")?;
    Ok(format!(
        "ratio {} at physical alpha",
        serde_json::to_string(&r.computed).unwrap()
    ))
}

fn reduction(g: &Gate) -> Outcome {
    let c = g.bound("fields.reduction.cross_terms", 1, 1e-12, false)?;
    let v = g.bound("fields.reduction.v_vs_ba1", 1, 1e-12, true)?;
    let h = g.bound("fields.reduction.ba1_vs_h", 1, 1e-12, true)?;
    Ok(format!(
        "cross terms {c:.1e}, potential form {v:.1e}, Hamiltonian {h:.1e}"
    ))
}

fn lattice(g: &Gate) -> Outcome {
    let o = g.one("lattice.convergence.uniform_b")?;
    if !(o.abs_err <= 0.15) {
        return Err(format!("order deviates from 2 by {:.3}", o.abs_err));
    }
    let a = g.bound("lattice.analytic.", 2, 1e-12, false)?;
    Ok(format!(
        "order {} over h = 0.2, 0.1, 0.05; analytic path {a:.1e}",
        serde_json::to_string(&o.computed).unwrap()
    ))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("diraclab-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for i in 0..2 {
        let path = dir.join(format!("run{i}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_diraclab"))
            .args(["verify", "--seed", "31337", "--out"])
            .arg(&path)
            .env_remove("DIRACLAB_CONFIG")
            .output()
            .map_err(|e| e.to_string())?
            .status;
        if !status.success() {
            return Err(format!("verify run {i} exited with {status}"));
        }
        reports.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    if reports[0] != reports[1] {
        return Err("reports differ".into());
    }
    Ok(format!("two runs, {} identical bytes", reports[0].len()))
}

fn main() -> ExitCode {
    let report = run_suite(&RunConfig::default());
    let g = Gate { report: &report };
    let criteria: [(&str, Outcome); 11] = [
        ("clifford relations", clifford(&g)),
        ("spectrum", spectrum(&g)),
        ("J_z eigenvalues", jz(&g)),
        ("plane-wave residuals", residuals(&g)),
        ("trembling motion", zitterbewegung(&g)),
        ("self fields", self_fields(&g)),
        ("rest energy", rest_energy(&g)),
        ("anomalous moment", anomalous(&g)),
        ("self-action reduction", reduction(&g)),
        ("lattice convergence", lattice(&g)),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in criteria.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("[{:>2}] PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[{:>2}] FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
