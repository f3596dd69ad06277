//! Experiment runners.
//!
//! Ratio kinds (see [`Kind::is_ratio`]) produce one [`RatioRow`] per trial
//! and pass when the largest ratio stays below the calibrated constant for
//! their parameter fingerprint. The other kinds carry their own checks.
//!
//! [`RatioRow`]: crate::report::RatioRow

mod data;
mod ratio;
mod single;
mod solver;

use std::path::Path;

use serde_json::Value;

use crate::calibration::{fingerprint, resolve_dir, CalibrationEntry, CalibrationStore, CAL_SEED_BASE};
use crate::config::{ExperimentConfig, Kind};
use crate::error::{HarnessError, HarnessResult};
use crate::report::{max_ratio, mean_ratio, write_csv, write_json, OutputPaths, RatioSummary};

pub use data::bump;
pub use ratio::{ratio_run, RatioRun, EMBEDDING_EXACT_SLACK};
pub use single::{DEFAULT_SYMBOL_TOLERANCE, M22_TOLERANCE};
pub use solver::{CONTRACTION_BOUND, DEFAULT_AMPLITUDE, DEFAULT_EPSILON, DEFAULT_GAP_TOLERANCE};

/// First seed of verification runs unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 1;

/// Which side of the calibrate-then-verify protocol a run is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Calibrate,
    Verify,
}

pub fn default_trials(kind: Kind) -> usize {
    match kind {
        Kind::SolutionLipschitz => 20,
        _ => 100,
    }
}

/// Calibration samples four times as many trials as a verification run,
/// so that the tail of the ratio distribution is represented in the
/// constant.
pub fn default_calibration_trials(kind: Kind) -> usize {
    4 * default_trials(kind)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub kind: Kind,
    pub pass: bool,
    /// The JSON report, as written.
    pub report: Value,
}

fn kind_of(cfg: &ExperimentConfig) -> HarnessResult<Kind> {
    cfg.kind
        .ok_or_else(|| HarnessError::Config("no experiment kind given".into()))
}

/// Runs one experiment and writes its reports under `out`, if given.
pub fn run(cfg: &ExperimentConfig, cal_dir: Option<&Path>, out: Option<&OutputPaths>) -> HarnessResult<Outcome> {
    let kind = kind_of(cfg)?;
    match kind {
        Kind::Norms => single::norms(cfg, out),
        Kind::SymbolNorm => single::symbol_norm(cfg, out),
        Kind::Solve => solver::solve(cfg, out),
        Kind::ReferenceCompare => solver::reference_compare(cfg, out),
        _ => verify(kind, cfg, cal_dir, out),
    }
}

/// `osc-decay` is deterministic and ignores `--trials`.
fn reported_trials(kind: Kind, trials: usize, run: &RatioRun) -> usize {
    if kind == Kind::OscDecay {
        run.rows.len()
    } else {
        trials
    }
}

fn write_ratio_reports(out: Option<&OutputPaths>, run: &RatioRun, summary: &RatioSummary) -> HarnessResult<()> {
    if let Some(o) = out {
        write_csv(&o.csv(), &run.rows)?;
        write_json(&o.json(), summary)?;
    }
    Ok(())
}

fn verify(kind: Kind, cfg: &ExperimentConfig, cal_dir: Option<&Path>, out: Option<&OutputPaths>) -> HarnessResult<Outcome> {
    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let trials = cfg.trials.unwrap_or(default_trials(kind));
    let run = ratio_run(kind, cfg, seed, trials, Phase::Verify)?;
    let trials = reported_trials(kind, trials, &run);
    let fp = fingerprint(kind, &run.params);
    let (constant, version) = match run.exact_bound {
        Some(b) => (Some(b), None),
        None => {
            let dir = resolve_dir(cal_dir);
            let store = CalibrationStore::open(&dir)?;
            match store.lookup(&fp) {
                Some(e) => {
                    if e.seeds.overlaps(&run.seeds) {
                        return Err(HarnessError::Config(format!(
                            "seeds {}..{} overlap the calibration seeds {}..{} of {fp}",
                            run.seeds.start, run.seeds.end, e.seeds.start, e.seeds.end
                        )));
                    }
                    (Some(e.c_cal), Some(e.version))
                }
                None if run.rows.is_empty() => (None, None),
                None => {
                    return Err(HarnessError::Calibration(format!(
                        "no calibrated constant for {fp} in {}; run `tfwave calibrate {kind}` with the same parameters",
                        dir.display()
                    )))
                }
            }
        }
    };
    let max = max_ratio(&run.rows);
    let pass = constant.is_none_or(|c| max <= c);
    let summary = RatioSummary {
        kind: kind.name().into(),
        fingerprint: fp,
        params: run.params.clone(),
        seeds: run.seeds,
        trials,
        max_ratio: max,
        mean_ratio: mean_ratio(&run.rows),
        calibration_constant: constant,
        calibration_version: version,
        pass,
        extra: run.extra.clone(),
    };
    write_ratio_reports(out, &run, &summary)?;
    Ok(Outcome {
        kind,
        pass,
        report: serde_json::to_value(&summary)?,
    })
}

/// Runs a ratio experiment on the calibration seeds (default from
/// [`CAL_SEED_BASE`]) and appends `max ratio × 1.25` to the store.
pub fn calibrate(
    cfg: &ExperimentConfig,
    cal_dir: Option<&Path>,
    force: bool,
    out: Option<&OutputPaths>,
) -> HarnessResult<(CalibrationEntry, Outcome)> {
    let kind = kind_of(cfg)?;
    if !kind.is_ratio() {
        return Err(HarnessError::Config(format!("{kind} does not produce ratios and cannot be calibrated")));
    }
    let seed = cfg.seed.unwrap_or(CAL_SEED_BASE);
    let trials = cfg.trials.unwrap_or(default_calibration_trials(kind));
    let run = ratio_run(kind, cfg, seed, trials, Phase::Calibrate)?;
    let trials = reported_trials(kind, trials, &run);
    if run.rows.is_empty() {
        return Err(HarnessError::Config("calibration needs at least one trial".into()));
    }
    let max = max_ratio(&run.rows);
    if !max.is_finite() {
        return Err(HarnessError::Calibration(format!("non-finite ratio {max} during calibration")));
    }
    let dir = resolve_dir(cal_dir);
    std::fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
    let mut store = CalibrationStore::open(&dir)?;
    let entry = store.record(kind, run.params.clone(), max, run.seeds, trials, force)?;
    store.save()?;
    let summary = RatioSummary {
        kind: kind.name().into(),
        fingerprint: entry.fingerprint.clone(),
        params: run.params.clone(),
        seeds: run.seeds,
        trials,
        max_ratio: max,
        mean_ratio: mean_ratio(&run.rows),
        calibration_constant: Some(entry.c_cal),
        calibration_version: Some(entry.version),
        pass: true,
        extra: run.extra.clone(),
    };
    write_ratio_reports(out, &run, &summary)?;
    Ok((
        entry,
        Outcome {
            kind,
            pass: true,
            report: serde_json::to_value(&summary)?,
        },
    ))
}
