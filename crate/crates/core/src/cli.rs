//! Command-line front end: `solve`, `oracle`, `sweep`, `check`, `export`.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::equilibrium::{brute_force_oracle_with, EquilibriumResult, EquilibriumSettings, OracleReport, VerificationLevel};
use crate::error::{Error, Result};
use crate::network::{to_dot, Network};
use crate::scenario::{generate_scenario, Scenario, ScenarioFile, TypeDistribution};
use crate::sweeps::{run_check, run_sweep, solve_cell, CheckKind, SweepResult, SweepSpec};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_UNVERIFIED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cohesion-net", version, about = "Bilateral equilibria of the tolerance/cohesion network game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyArg {
    Exhaustive,
    Edge,
}

impl From<VerifyArg> for VerificationLevel {
    fn from(v: VerifyArg) -> Self {
        match v {
            VerifyArg::Exhaustive => VerificationLevel::Exhaustive,
            VerifyArg::Edge => VerificationLevel::EdgeMove,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve and certify one scenario.
    Solve {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        verify: Option<VerifyArg>,
        /// Also run the brute-force oracle (n ≤ 5).
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        seed_override: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate every bilateral equilibrium of a small scenario.
    Oracle {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        seed_override: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep and write rows.csv, thresholds.json, verdicts.json.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum)]
        verify: Option<VerifyArg>,
        /// Replace the spec's seed list with this single seed.
        #[arg(long)]
        seed_override: Option<u64>,
    },
    /// Re-run one check (prop3, prop4, extremists, flexibility, ladder) on a sweep directory.
    Check {
        name: String,
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a stored solve result.
    Export {
        #[arg(long)]
        result: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What `solve` writes and `export` reads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub scenario: ScenarioFile,
    pub result: EquilibriumResult,
    #[serde(default)]
    pub oracle: Option<OracleReport>,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("COHESION_NET_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).try_init();
}

/// Input problems map to 2, everything else to 1.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::TooFewAgents(_)
        | Error::DuplicateIdeology(_)
        | Error::InvalidParameter { .. }
        | Error::InvalidProfile(_)
        | Error::OracleTooLarge { .. }
        | Error::Schema(_)
        | Error::Parse(_)
        | Error::Io(_)
        | Error::Json(_) => EXIT_INPUT,
        Error::NotInDispute(..) | Error::NonUnimodal { .. } | Error::SolveFailed(_) => EXIT_UNVERIFIED,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_scenario(path: &Path, seed_override: Option<u64>) -> Result<Scenario> {
    let scenario = Scenario::from_json(&read(path)?)?;
    match seed_override {
        None => Ok(scenario),
        Some(seed) if scenario.type_distribution == TypeDistribution::UniformPinned => {
            generate_scenario(scenario.n(), scenario.params, seed)
        }
        Some(seed) => {
            let mut s = scenario;
            s.seed = seed;
            Ok(s)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Solve {
            scenario,
            verify,
            oracle,
            seed_override,
            out,
        } => {
            let scenario = load_scenario(&scenario, seed_override)?;
            let settings = EquilibriumSettings {
                verify: verify.map(Into::into),
                ..EquilibriumSettings::default()
            };
            let (result, oracle) = if oracle {
                let report = brute_force_oracle_with(&scenario, &settings)?;
                let result = report.solver.clone().expect("oracle runs the solver");
                (result, Some(report))
            } else {
                (solve_cell(&scenario, &settings)?, None)
            };
            let ok = result.certified() && oracle.as_ref().map_or(true, |o| o.matches_solver);
            let output = SolveOutput {
                scenario: ScenarioFile::from(&scenario),
                result,
                oracle,
            };
            emit(&serde_json::to_string_pretty(&output)?, out.as_deref())?;
            Ok(if ok { EXIT_OK } else { EXIT_UNVERIFIED })
        }
        Command::Oracle {
            scenario,
            seed_override,
            out,
        } => {
            let scenario = load_scenario(&scenario, seed_override)?;
            let report = brute_force_oracle_with(&scenario, &EquilibriumSettings::default())?;
            emit(&serde_json::to_string_pretty(&report)?, out.as_deref())?;
            Ok(if report.matches_solver { EXIT_OK } else { EXIT_UNVERIFIED })
        }
        Command::Sweep {
            spec,
            out,
            jobs,
            verify,
            seed_override,
        } => {
            let mut spec = SweepSpec::from_json(&read(&spec)?)?;
            if let Some(v) = verify {
                spec.settings.verify = Some(v.into());
            }
            if let Some(seed) = seed_override {
                spec.seeds = vec![seed];
            }
            let result = run_sweep(&spec, jobs)?;
            result.write_to(&out)?;
            for v in &result.verdicts {
                log::info!("{:?}: {}", v.check, if v.passed { "pass" } else { "fail" });
            }
            Ok(if result.verdicts.iter().all(|v| v.passed) { EXIT_OK } else { EXIT_UNVERIFIED })
        }
        Command::Check { name, dir, out } => {
            let check = CheckKind::parse(&name).ok_or_else(|| Error::InvalidParameter {
                name: "check",
                reason: format!("unknown check `{name}` (prop3, prop4, extremists, flexibility, ladder)"),
            })?;
            let result = SweepResult::read_from(&dir)?;
            let report = run_check(&result, check);
            emit(&serde_json::to_string_pretty(&report)?, out.as_deref())?;
            Ok(if report.passed { EXIT_OK } else { EXIT_UNVERIFIED })
        }
        Command::Export { result, format, out } => {
            let stored: SolveOutput = serde_json::from_str(&read(&result)?)
                .map_err(|e| Error::Parse(format!("result file, line {} column {}: {e}", e.line(), e.column())))?;
            let text = match format {
                FormatArg::Json => serde_json::to_string_pretty(&stored.result.network)?,
                FormatArg::Dot => {
                    let scenario = stored.scenario.into_scenario()?;
                    to_dot(&scenario, &stored.result.network)
                }
            };
            emit(&text, out.as_deref())?;
            Ok(EXIT_OK)
        }
    }
}

/// Reads a network written by `export --format json`.
pub fn import_network(text: &str) -> Result<Network> {
    Ok(serde_json::from_str(text)?)
}
