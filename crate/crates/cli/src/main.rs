use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diraclab::commands::{
    cmd_lattice, cmd_zbw, emit, parse_floats, parse_representation, parse_vec3, CliError,
    StateSpec, TimeSpec, ZbwRequest,
};
use diraclab::config::{load, parse_suites, ConfigError, ConfigLayer, RunConfig};
use diraclab::report::{run_suite, to_json_bytes};
use diraclab_core::clifford::Representation;

#[derive(Parser)]
#[command(
    name = "diraclab",
    version,
    about = "Checks the Dirac-electron model identities numerically"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suites and write a JSON report.
    Verify {
        /// Suite to run; repeat or comma-separate. Default: all.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Report path; JSON goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
        /// Negate one entry of β (negative control).
        #[arg(long, hide = true)]
        tamper_beta: bool,
    },
    /// Write a position-expectation trajectory as CSV.
    Zbw {
        /// Momentum `px,py,pz`.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// plus[:up|down], minus[:up|down], superposition[:up|down] or custom:<8 numbers>.
        #[arg(long, default_value = "superposition")]
        state: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Explicit comma-separated times; overrides t0/t1/steps.
        #[arg(long, allow_hyphen_values = true)]
        times: Option<String>,
        #[arg(long, default_value = "pauli-dirac")]
        rep: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Convergence order of the lattice field extraction.
    Lattice {
        /// uniform_b, linear_phi, constant_a or zero, optionally `:x,y,z`.
        #[arg(long)]
        preset: String,
        /// Comma-separated spacings, each half the previous.
        #[arg(long, default_value = "0.2,0.1,0.05")]
        h: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the effective constants and tolerances.
    Constants {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Config file (`key = value` lines); defaults to $DIRACLAB_CONFIG.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    hbar: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    charge: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tol_algebra: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tol_dynamics: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tol_lattice: Option<f64>,
}

impl Common {
    fn resolve(&self, suites: &[String], tamper: bool) -> Result<RunConfig, CliError> {
        let mut errors = Vec::new();
        let suites = if suites.is_empty() {
            None
        } else {
            match parse_suites(&suites.join(",")) {
                Ok(s) => Some(s),
                Err(es) => {
                    errors.extend(es);
                    None
                }
            }
        };
        let flags = ConfigLayer {
            hbar: self.hbar,
            c: self.c,
            mass: self.mass,
            charge: self.charge,
            tol_algebra: self.tol_algebra,
            tol_dynamics: self.tol_dynamics,
            tol_lattice: self.tol_lattice,
            seed: self.seed,
            suites,
            tamper_beta: tamper.then_some(true),
        };
        match load(self.config.as_deref(), flags) {
            Ok(cfg) if errors.is_empty() => Ok(cfg),
            Ok(_) => Err(ConfigError(errors).into()),
            Err(ConfigError(es)) => {
                errors.extend(es);
                Err(ConfigError(errors).into())
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Verify {
            suites,
            out,
            common,
            tamper_beta,
        } => {
            let cfg = common.resolve(&suites, tamper_beta)?;
            let report = run_suite(&cfg);
            emit(out.as_deref(), &report.to_json())?;
            if out.is_some() {
                let _ = report.write_text(std::io::stdout().lock());
            } else {
                let _ = report.write_text(std::io::stderr().lock());
            }
            Ok(if report.summary.failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Zbw {
            p,
            state,
            t0,
            t1,
            steps,
            times,
            rep,
            out,
            common,
        } => {
            let cfg = common.resolve(&[], false)?;
            let mut errors = Vec::new();
            let p = parse_vec3("p", &p)
                .map_err(|e| errors.push(e))
                .unwrap_or_default();
            let state = state.parse::<StateSpec>().map_err(|e| errors.push(e)).ok();
            let rep = parse_representation(&rep)
                .map_err(|e| errors.push(format!("rep: {e}")))
                .unwrap_or(Representation::PauliDirac);
            let times = match (times, t1) {
                (Some(list), _) => parse_floats("times", &list)
                    .map(TimeSpec::List)
                    .map_err(|e| errors.push(e))
                    .ok(),
                (None, Some(t1)) => Some(TimeSpec::Range { t0, t1, steps }),
                (None, None) => {
                    errors.push("t1: required unless --times is given".into());
                    None
                }
            };
            let (Some(state), Some(times), true) = (state, times, errors.is_empty()) else {
                return Err(ConfigError(errors).into());
            };
            let req = ZbwRequest {
                p,
                state,
                times,
                rep,
                out,
            };
            let outcome = cmd_zbw(cfg.constants, &req)?;
            let line = outcome.summary_line();
            if req.out.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Lattice {
            preset,
            h,
            out,
            common,
        } => {
            let cfg = common.resolve(&[], false)?;
            let spacings = parse_floats("h", &h).map_err(CliError::invalid)?;
            let table = cmd_lattice(cfg.constants, &preset, &spacings, out.as_deref())?;
            let line = format!(
                "{}: order {} over h = {:?}",
                table.preset, table.order, table.h
            );
            if out.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Constants { common } => {
            let cfg = common.resolve(&[], false)?;
            emit(None, &to_json_bytes(&cfg))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
