//! Command line. Exit status: `0` all checks pass, `1` a check failed,
//! `2` bad configuration, `3` runtime error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{ExperimentConfig, Kind};
use crate::error::HarnessResult;
use crate::experiments::{calibrate, run};
use crate::report::OutputPaths;
use crate::suite::{calibrate_all, exit_code, verify_all, SuiteResult};

#[derive(Debug, Parser)]
#[command(name = "tfwave", version, about = "Time-frequency norms, Fourier multipliers and nonlinear wave experiments")]
pub struct Cli {
    /// Calibration store directory; overrides TFWAVE_CAL_DIR
    #[arg(long, global = true)]
    pub cal_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment and check it
    Run {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        config: ExperimentConfig,
    },
    /// Fit and store the constant of a ratio experiment
    Calibrate {
        #[arg(value_enum)]
        kind: Kind,
        /// Add a new version even if the fingerprint is already calibrated
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        config: ExperimentConfig,
    },
    /// Calibrate every ratio experiment of the verification suite
    CalibrateAll {
        #[arg(long)]
        force: bool,
        /// Directory for per-experiment reports
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the whole verification suite
    VerifyAll {
        /// Directory for per-experiment reports
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    Norms(ExperimentConfig),
    ProductCheck(ExperimentConfig),
    EmbeddingCheck(ExperimentConfig),
    MultiplierCheck(ExperimentConfig),
    SymbolNorm(ExperimentConfig),
    Solve(ExperimentConfig),
    ReferenceCompare(ExperimentConfig),
    LipschitzProbe(ExperimentConfig),
    SolutionLipschitz(ExperimentConfig),
    LemmaL3(ExperimentConfig),
    Monotonicity(ExperimentConfig),
    OscDecay(ExperimentConfig),
}

fn direct(command: Command) -> Result<(Kind, ExperimentConfig), Command> {
    Ok(match command {
        Command::Norms(c) => (Kind::Norms, c),
        Command::ProductCheck(c) => (Kind::ProductCheck, c),
        Command::EmbeddingCheck(c) => (Kind::EmbeddingCheck, c),
        Command::MultiplierCheck(c) => (Kind::MultiplierCheck, c),
        Command::SymbolNorm(c) => (Kind::SymbolNorm, c),
        Command::Solve(c) => (Kind::Solve, c),
        Command::ReferenceCompare(c) => (Kind::ReferenceCompare, c),
        Command::LipschitzProbe(c) => (Kind::LipschitzProbe, c),
        Command::SolutionLipschitz(c) => (Kind::SolutionLipschitz, c),
        Command::LemmaL3(c) => (Kind::LemmaL3, c),
        Command::Monotonicity(c) => (Kind::Monotonicity, c),
        Command::OscDecay(c) => (Kind::OscDecay, c),
        Command::Run { kind, config } => (kind, config),
        other => return Err(other),
    })
}

fn with_kind(kind: Kind, mut config: ExperimentConfig) -> HarnessResult<ExperimentConfig> {
    config.kind = Some(kind);
    config.resolve_file()
}

fn print_json(value: &serde_json::Value) -> HarnessResult<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn suite_line(r: &SuiteResult) {
    match &r.outcome {
        Ok(o) => eprintln!("{} {}", if o.pass { "PASS" } else { "FAIL" }, r.name),
        Err(e) => eprintln!("ERROR {}: {e}", r.name),
    }
}

/// Executes a parsed command line and returns the exit status.
pub fn execute(cli: Cli) -> HarnessResult<i32> {
    let cal_dir = cli.cal_dir.as_deref();
    let command = match direct(cli.command) {
        Ok((kind, config)) => {
            let config = with_kind(kind, config)?;
            let out = OutputPaths::new(&config.report_path().unwrap_or_else(|| PathBuf::from(kind.name())));
            let outcome = run(&config, cal_dir, Some(&out))?;
            print_json(&outcome.report)?;
            eprintln!("{} {kind}", if outcome.pass { "PASS" } else { "FAIL" });
            return Ok(if outcome.pass { 0 } else { 1 });
        }
        Err(other) => other,
    };
    match command {
        Command::Calibrate { kind, force, config } => {
            let config = with_kind(kind, config)?;
            let out = config.report_path().map(|p| OutputPaths::new(&p));
            let (entry, _) = calibrate(&config, cal_dir, force, out.as_ref())?;
            print_json(&serde_json::to_value(&entry)?)?;
            Ok(0)
        }
        Command::CalibrateAll { force, out_dir } => {
            let results = calibrate_all(cal_dir, force, out_dir.as_deref(), suite_line);
            Ok(exit_code(&results))
        }
        Command::VerifyAll { out_dir } => {
            let results = verify_all(cal_dir, out_dir.as_deref(), suite_line);
            Ok(exit_code(&results))
        }
        _ => unreachable!("experiment commands are handled above"),
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_documented_invocations() {
        let cli = Cli::try_parse_from([
            "tfwave",
            "multiplier-check",
            "--symbol",
            "sinpow:1:1",
            "--in",
            "mod:p=2,q=1,s=0",
            "--out",
            "mod:p=2,q=1,s=1",
            "--trials",
            "100",
            "--seed",
            "7",
        ])
        .unwrap();
        let Ok((kind, mut cfg)) = direct(cli.command) else { panic!() };
        cfg.kind = Some(kind);
        assert_eq!(cfg.output_spec(), Some("mod:p=2,q=1,s=1"));
        assert_eq!(cfg.in_spec.as_deref(), Some("mod:p=2,q=1,s=0"));

        let cli = Cli::try_parse_from([
            "tfwave", "solve", "--theorem", "t2", "--d", "1", "--p", "2", "--q", "1", "--s", "0", "--k", "1",
            "--lambda", "1.0", "--T", "0.1", "--nt", "64", "--tol", "1e-8", "--seed", "3", "--out", "run.json",
        ])
        .unwrap();
        let Ok((Kind::Solve, cfg)) = direct(cli.command) else { panic!() };
        assert_eq!(cfg.t_final, Some(0.1));
        assert_eq!(cfg.report_path(), Some(PathBuf::from("run.json")));

        let cli = Cli::try_parse_from(["tfwave", "run", "product-check", "--N", "3", "--trials", "0"]).unwrap();
        let Ok((Kind::ProductCheck, cfg)) = direct(cli.command) else { panic!() };
        assert_eq!((cfg.factors, cfg.trials), (Some(3), Some(0)));

        let cli = Cli::try_parse_from(["tfwave", "solve", "--lambda", "-1", "--s", "-0.5"]).unwrap();
        let Ok((_, cfg)) = direct(cli.command) else { panic!() };
        assert_eq!((cfg.lambda, cfg.s), (Some(-1.0), Some(-0.5)));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(main_with(["tfwave", "run", "nonsense"]), 2);
        assert_eq!(main_with(["tfwave", "norms", "--p", "abc"]), 2);
    }
}
