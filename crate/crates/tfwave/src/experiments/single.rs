//! `norms` and `symbol-norm`: direct evaluations with their own checks.

use serde_json::json;
use tfwave_core::grid::{weighted_lp_norm, Exponent, Weight};
use tfwave_core::multipliers::{symbol_amalgam_norm, LocalGrid};
use tfwave_core::sampler::GaborSampler;
use tfwave_core::tfnorms::{ModulationSpec, NormContext, NormSpec, RatioSample};

use super::data::{exp_json, exp_value, exponent, grid_json, load_shape, symbol_delta};
use super::ratio::par_rows;
use super::{Outcome, DEFAULT_SEED};
use crate::config::{ExperimentConfig, Kind};
use crate::error::{HarnessError, HarnessResult};
use crate::report::{max_ratio, mean_ratio, write_csv, write_json, write_table, OutputPaths};
use crate::specs::{format_norm_spec, format_symbol, parse_norm_spec, parse_symbol};

/// Relative tolerance of `‖f‖_{M^{2,2}} = ‖f‖_2` with a unit-`L²` window.
pub const M22_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_SYMBOL_TOLERANCE: f64 = 0.05;

/// Norm of one test function, or of `--trials` random superpositions with
/// `--f gabor`. Rows compare the norm (lhs) with the `L²` norm (rhs). For
/// `mod:2,2,0` the two must agree to [`M22_TOLERANCE`]; other specs only
/// need finite values.
pub fn norms(cfg: &ExperimentConfig, out: Option<&OutputPaths>) -> HarnessResult<Outcome> {
    let f_name = cfg.f.as_deref().unwrap_or("gaussian");
    let spec_text = cfg.spec.as_deref().unwrap_or("mod:2,2,0");
    let norm = parse_norm_spec(spec_text)?;
    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let l2 = |f: &_| weighted_lp_norm(f, Exponent::TWO, Weight::unweighted());

    let (grid, rows) = if f_name == "gabor" {
        let grid = cfg.grid()?;
        let ctx = NormContext::new(grid);
        let sampler = GaborSampler::new(grid);
        let trials = cfg.trials.unwrap_or(100);
        let rows = par_rows(seed, trials, |t| {
            let f = sampler.trial(seed, t);
            Ok(RatioSample::new(ctx.norm(&f, &norm)?, l2(&f)))
        })?;
        (grid, rows)
    } else {
        let f = load_shape(f_name, cfg, 512, 32.0, seed)?.f;
        let ctx = NormContext::new(f.spec());
        let sample = RatioSample::new(ctx.norm(&f, &norm)?, l2(&f));
        let rows = par_rows(seed, 1, |_| Ok(sample))?;
        (f.spec(), rows)
    };

    let m22 = NormSpec::Modulation(ModulationSpec::new(2.0, 2.0, 0.0)?);
    let identity = norm == m22;
    let deviation = rows
        .iter()
        .map(|r| if r.rhs == 0.0 { r.lhs } else { (r.lhs - r.rhs).abs() / r.rhs })
        .fold(0.0, f64::max);
    let pass = if identity {
        deviation <= M22_TOLERANCE
    } else {
        rows.iter().all(|r| r.lhs.is_finite())
    };
    let mut report = json!({
        "kind": Kind::Norms.name(),
        "f": f_name,
        "spec": format_norm_spec(&norm),
        "grid": grid_json(grid),
        "seed": seed,
        "trials": rows.len(),
        "max_ratio": max_ratio(&rows),
        "mean_ratio": mean_ratio(&rows),
        "pass": pass,
    });
    if rows.len() == 1 && f_name != "gabor" {
        report["value"] = json!(rows[0].lhs);
        report["l2_norm"] = json!(rows[0].rhs);
    }
    if identity {
        report["check"] = json!("m22-equals-l2");
        report["max_relative_deviation"] = json!(deviation);
        report["tolerance"] = json!(M22_TOLERANCE);
    }
    if let Some(o) = out {
        write_csv(&o.csv(), &rows)?;
        write_json(&o.json(), &report)?;
    }
    Ok(Outcome {
        kind: Kind::Norms,
        pass,
        report,
    })
}

/// `W(FL^p, L^∞_γ)` norm of a symbol over translates `|x_i| ≤ xi_max` and
/// `≤ 2·xi_max`; passes when the two differ by less than the tolerance
/// (relative). `γ` defaults to the symbol's decay exponent.
pub fn symbol_norm(cfg: &ExperimentConfig, out: Option<&OutputPaths>) -> HarnessResult<Outcome> {
    let sym = parse_symbol(cfg.symbol.as_deref().unwrap_or("sinpow:1:1"))?;
    let p = exponent(exp_value(cfg.p, 1.0))?;
    let gamma = cfg.gamma.unwrap_or_else(|| symbol_delta(&sym));
    let d = cfg.dim();
    if !(1..=2).contains(&d) {
        return Err(HarnessError::Config(format!("dimension must be 1 or 2, got {d}")));
    }
    let xi_max = cfg.xi_max.unwrap_or(if d == 1 { 64.0 } else { 8.0 });
    let tolerance = cfg.tolerance.unwrap_or(DEFAULT_SYMBOL_TOLERANCE);
    let local = LocalGrid::default_for(d);
    let short = symbol_amalgam_norm(&sym, p, gamma, xi_max, d, local)?;
    let long = symbol_amalgam_norm(&sym, p, gamma, 2.0 * xi_max, d, local)?;
    let change = if short.value == 0.0 {
        if long.value == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (long.value - short.value).abs() / short.value
    };
    let pass = short.value.is_finite() && long.value.is_finite() && change < tolerance;
    let report = json!({
        "kind": Kind::SymbolNorm.name(),
        "symbol": format_symbol(&sym),
        "p": exp_json(p.value()),
        "gamma": gamma,
        "d": d,
        "xi_max": xi_max,
        "local_grid": {"box": local.box_len, "n": local.n, "step": local.step},
        "value": short.value,
        "value_doubled": long.value,
        "relative_change": change,
        "tolerance": tolerance,
        "pass": pass,
    });
    if let Some(o) = out {
        let header: &[&str] = if d == 1 { &["x", "value"] } else { &["x1", "x2", "value"] };
        let rows: Vec<Vec<String>> = long
            .profile
            .iter()
            .map(|(x, v)| {
                let mut row: Vec<String> = x[..d].iter().map(f64::to_string).collect();
                row.push(v.to_string());
                row
            })
            .collect();
        write_table(&o.csv(), header, &rows)?;
        write_json(&o.json(), &report)?;
    }
    Ok(Outcome {
        kind: Kind::SymbolNorm,
        pass,
        report,
    })
}
