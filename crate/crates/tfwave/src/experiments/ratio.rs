//! Ratio-producing experiments. Each returns one row per trial plus the
//! parameter set that identifies its calibrated constant.

use rayon::prelude::*;
use serde_json::{json, Value};
use tfwave_core::grid::{Domain, GridFunction};
use tfwave_core::multipliers::{
    estimate_operator_norm, osc_derivative_decay, Cutoff, OperatorProblem, RefineConfig,
};
use tfwave_core::nlw::{lipschitz_exponent, lipschitz_probe, Nonlinearity};
use tfwave_core::sampler::{trial_rng, GaborSampler};
use tfwave_core::tfnorms::{
    check_embedding, check_product_estimate, lemma_l3_bound, lemma_l3_order, ModulationSpec, NormContext, NormSpec,
    ProductSpace, RatioSample, Window,
};

use super::data::{bump, exp_json, exp_value, exponent, grid_json, sampler_json, symbol_delta};
use super::{solver, Phase};
use crate::calibration::SeedRange;
use crate::config::{ExperimentConfig, Kind, Space};
use crate::error::{HarnessError, HarnessResult};
use crate::report::RatioRow;
use crate::specs::{format_norm_spec, format_symbol, parse_norm_spec, parse_symbol};

/// Result of a ratio experiment before it is compared with a constant.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRun {
    /// Everything that determines the distribution of ratios; hashed into
    /// the calibration fingerprint.
    pub params: Value,
    pub seeds: SeedRange,
    pub rows: Vec<RatioRow>,
    pub extra: Value,
    /// A bound known in closed form, used instead of a calibrated constant.
    pub exact_bound: Option<f64>,
}

impl RatioRun {
    pub(crate) fn new(params: Value, seed: u64, trials: usize, rows: Vec<RatioRow>) -> Self {
        Self {
            params,
            seeds: SeedRange::new(seed, trials as u64),
            rows,
            extra: json!({}),
            exact_bound: None,
        }
    }
}

/// Trial `t` gets seed `seed + t`; rows come back in trial order whatever
/// the scheduling.
pub(crate) fn par_rows<F>(seed: u64, trials: usize, f: F) -> HarnessResult<Vec<RatioRow>>
where
    F: Fn(u64) -> HarnessResult<RatioSample> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = f(t as u64)?;
            Ok(RatioRow {
                trial: t,
                seed: seed.wrapping_add(t as u64),
                lhs: s.lhs,
                rhs: s.rhs,
                ratio: s.ratio,
            })
        })
        .collect()
}

pub fn ratio_run(kind: Kind, cfg: &ExperimentConfig, seed: u64, trials: usize, phase: Phase) -> HarnessResult<RatioRun> {
    match kind {
        Kind::ProductCheck => product(cfg, seed, trials),
        Kind::EmbeddingCheck => embedding(cfg, seed, trials),
        Kind::MultiplierCheck => multiplier(cfg, seed, trials),
        Kind::LipschitzProbe => lipschitz(cfg, seed, trials),
        Kind::SolutionLipschitz => solver::solution_lipschitz(cfg, seed, trials),
        Kind::LemmaL3 => lemma_l3(cfg, seed, trials),
        Kind::Monotonicity => monotonicity(cfg, seed, trials),
        Kind::OscDecay => osc_decay(cfg, seed, phase),
        _ => Err(HarnessError::Config(format!("{kind} does not produce ratios"))),
    }
}

fn product(cfg: &ExperimentConfig, seed: u64, trials: usize) -> HarnessResult<RatioRun> {
    let factors = cfg.factors.unwrap_or(3);
    let p = exponent(exp_value(cfg.p, 1.0))?;
    let q = exponent(exp_value(cfg.q, 1.0))?;
    let r = exponent(exp_value(cfg.r, 1.0))?;
    let s = cfg.s.unwrap_or(0.0);
    let space = cfg.space.unwrap_or(Space::Mod);
    let gamma = cfg.gamma.unwrap_or(0.0);
    let product_space = match space {
        Space::Mod => ProductSpace::Modulation,
        Space::Am => ProductSpace::Amalgam { gamma },
    };
    let spec = cfg.grid_with(1024, 32.0)?;
    let ctx = NormContext::new(spec);
    let sampler = GaborSampler::alias_free(spec, factors);
    // Numerology and sign checks happen before any norm is taken.
    let zeros = vec![GridFunction::zeros(spec, Domain::Spatial); factors];
    check_product_estimate(&zeros, p, r, q, s, &ctx, product_space)?;

    let mut params = json!({
        "grid": grid_json(spec),
        "N": factors,
        "p": exp_json(p.value()),
        "q": exp_json(q.value()),
        "r": exp_json(r.value()),
        "s": s,
        "space": space,
        "sampler": sampler_json(&sampler),
    });
    if space == Space::Am {
        params["gamma"] = json!(gamma);
    }
    let rows = par_rows(seed, trials, |t| {
        let mut rng = trial_rng(seed, t);
        let us: Vec<GridFunction> = (0..factors).map(|_| sampler.sample(&mut rng).render(spec)).collect();
        Ok(check_product_estimate(&us, p, r, q, s, &ctx, product_space)?)
    })?;
    Ok(RatioRun::new(params, seed, trials, rows))
}

/// Slack allowed on the closed-form bound `lhs ≤ rhs` when `q = r`.
pub const EMBEDDING_EXACT_SLACK: f64 = 1e-10;

fn embedding(cfg: &ExperimentConfig, seed: u64, trials: usize) -> HarnessResult<RatioRun> {
    let r = exponent(exp_value(cfg.r, 2.0))?;
    let q = exponent(exp_value(cfg.q, 1.0))?;
    let p = exponent(exp_value(cfg.p, 2.0))?;
    let s = cfg.s.unwrap_or(0.0);
    let gamma = cfg.gamma.unwrap_or(0.0);
    let spec = cfg.grid()?;
    let window = Window::bump(spec);
    let sampler = GaborSampler::new(spec);
    check_embedding(&GridFunction::zeros(spec, Domain::Spatial), r, q, s, gamma, p, &window)?;
    let params = json!({
        "grid": grid_json(spec),
        "r": exp_json(r.value()),
        "q": exp_json(q.value()),
        "p": exp_json(p.value()),
        "s": s,
        "gamma": gamma,
        "sampler": sampler_json(&sampler),
    });
    let rows = par_rows(seed, trials, |t| {
        Ok(check_embedding(&sampler.trial(seed, t), r, q, s, gamma, p, &window)?)
    })?;
    let mut run = RatioRun::new(params, seed, trials, rows);
    if q == r {
        run.exact_bound = Some(1.0 + EMBEDDING_EXACT_SLACK);
    }
    Ok(run)
}

fn multiplier(cfg: &ExperimentConfig, seed: u64, trials: usize) -> HarnessResult<RatioRun> {
    let sym = parse_symbol(cfg.symbol.as_deref().unwrap_or("sinpow:1:1"))?;
    let in_spec = parse_norm_spec(cfg.in_spec.as_deref().unwrap_or("mod:2,1,0"))?;
    let out_spec = match cfg.output_spec() {
        Some(text) => parse_norm_spec(text)?,
        None => in_spec.shifted(symbol_delta(&sym)),
    };
    let spec = cfg.grid()?;
    let xi_max = cfg.xi_max.unwrap_or(64.0);
    let refine = RefineConfig::default();
    let sampler = GaborSampler::new(spec);
    let params = json!({
        "grid": grid_json(spec),
        "symbol": format_symbol(&sym),
        "in": format_norm_spec(&in_spec),
        "out": format_norm_spec(&out_spec),
        "xi_max": xi_max,
        "refine": {"rounds": refine.rounds, "candidates": refine.candidates, "initial_scale": refine.initial_scale},
        "sampler": sampler_json(&sampler),
    });
    let problem = OperatorProblem::new(sym, in_spec, out_spec, NormContext::new(spec))?;
    let report = estimate_operator_norm(&problem, &sampler, seed, trials, refine, xi_max)?;
    let norm = report.symbol_norm;
    // Rows are normalized by the symbol norm so the calibrated constant is
    // the one in `‖H_σ f‖ ≤ C‖σ‖‖f‖`.
    let rows = report
        .trials
        .iter()
        .map(|t| RatioRow {
            trial: t.trial,
            seed: t.seed,
            lhs: t.sample.lhs,
            rhs: t.sample.rhs * norm,
            ratio: if t.sample.lhs == 0.0 { 0.0 } else { t.sample.ratio / norm },
        })
        .collect();
    let touched = if trials == 0 { 0 } else { trials + refine.rounds };
    let mut run = RatioRun::new(params, seed, touched, rows);
    run.extra = json!({"symbol_norm": norm, "operator_norm_lower_bound": report.max_ratio});
    Ok(run)
}

fn lipschitz(cfg: &ExperimentConfig, seed: u64, trials: usize) -> HarnessResult<RatioRun> {
    let k = cfg.k.unwrap_or(1);
    let lambda = cfg.lambda.unwrap_or(1.0);
    let p = exp_value(cfg.p, 2.0);
    let q = exp_value(cfg.q, 1.0);
    let s = cfg.s.unwrap_or(0.0);
    let r = lipschitz_exponent(q, k)?;
    ModulationSpec::new(p, q, s)?;
    let spec = cfg.grid_with(1024, 32.0)?;
    let ctx = NormContext::new(spec);
    let sampler = GaborSampler::alias_free(spec, 2 * k as usize + 1);
    let f = Nonlinearity::power_law(lambda, k);
    let params = json!({
        "grid": grid_json(spec),
        "k": k,
        "lambda": lambda,
        "p": exp_json(p),
        "q": exp_json(q),
        "s": s,
        "sampler": sampler_json(&sampler),
    });
    let rows = par_rows(seed, trials, |t| {
        let mut rng = trial_rng(seed, t);
        let u = sampler.sample(&mut rng).render(spec);
        let v = sampler.sample(&mut rng).render(spec);
        Ok(lipschitz_probe(&f, &u, &v, p, q, s, &ctx)?)
    })?;
    let mut run = RatioRun::new(params, seed, trials, rows);
    run.extra = json!({"r": exp_json(r)});
    Ok(run)
}

fn lemma_l3(cfg: &ExperimentConfig, seed: u64, trials: usize) -> HarnessResult<RatioRun> {
    let p = exponent(exp_value(cfg.p, 2.0))?;
    let radius = cfg.radius.unwrap_or(1.0);
    if !(radius > 0.0) {
        return Err(HarnessError::Config(format!("radius must be positive, got {radius}")));
    }
    let spec = cfg.grid()?;
    let k = cfg.k.unwrap_or_else(|| lemma_l3_order(p, spec.d()));
    let sampler = GaborSampler::new(spec);
    let envelope = bump(spec, radius);
    let params = json!({
        "grid": grid_json(spec),
        "p": exp_json(p.value()),
        "radius": radius,
        "k": k,
        "sampler": sampler_json(&sampler),
    });
    let rows = par_rows(seed, trials, |t| {
        let f = envelope.mul(&sampler.trial(seed, t))?;
        Ok(lemma_l3_bound(&f, p, radius, k)?)
    })?;
    Ok(RatioRun::new(params, seed, trials, rows))
}

fn monotonicity(cfg: &ExperimentConfig, seed: u64, trials: usize) -> HarnessResult<RatioRun> {
    let (p1, q1) = (exp_value(cfg.p, 1.0), exp_value(cfg.q, 1.0));
    let (p2, q2) = (exp_value(cfg.p2, 2.0), exp_value(cfg.q2, 2.0));
    let s = cfg.s.unwrap_or(0.0);
    let small = NormSpec::Modulation(ModulationSpec::new(p1, q1, s)?);
    let large = NormSpec::Modulation(ModulationSpec::new(p2, q2, s)?);
    if p2 < p1 || q2 < q1 {
        return Err(HarnessError::Config(format!(
            "monotonicity needs p ≤ p2 and q ≤ q2, got ({p1}, {q1}) and ({p2}, {q2})"
        )));
    }
    let spec = cfg.grid()?;
    let ctx = NormContext::new(spec);
    let sampler = GaborSampler::new(spec);
    let params = json!({
        "grid": grid_json(spec),
        "small": format_norm_spec(&small),
        "large": format_norm_spec(&large),
        "sampler": sampler_json(&sampler),
    });
    let rows = par_rows(seed, trials, |t| {
        let f = sampler.trial(seed, t);
        Ok(RatioSample::new(ctx.norm(&f, &large)?, ctx.norm(&f, &small)?))
    })?;
    Ok(RatioRun::new(params, seed, trials, rows))
}

pub const OSC_SPACING: f64 = 0.05;
pub const OSC_STEP: f64 = 1e-4;

/// Derivative orders 0, 1, 2 as rows `trial = order`, `rhs = 1`. The
/// window `|ξ| ≤ xi_max` defaults to 32 when calibrating and 128 when
/// verifying, and is left out of the fingerprint: the constant fitted on
/// the short window must hold on the long one.
fn osc_decay(cfg: &ExperimentConfig, seed: u64, phase: Phase) -> HarnessResult<RatioRun> {
    let sym = parse_symbol(cfg.symbol.as_deref().unwrap_or("sinpow:1:1"))?;
    let xi_max = cfg.xi_max.unwrap_or(match phase {
        Phase::Calibrate => 32.0,
        Phase::Verify => 128.0,
    });
    let cutoff = Cutoff::standard();
    let decay = osc_derivative_decay(&sym, cutoff, xi_max, OSC_SPACING, OSC_STEP)?;
    let params = json!({
        "symbol": format_symbol(&sym),
        "cutoff": {"inner": cutoff.inner, "outer": cutoff.outer},
        "spacing": OSC_SPACING,
        "step": OSC_STEP,
    });
    let rows = decay
        .orders
        .iter()
        .enumerate()
        .map(|(order, &v)| RatioRow {
            trial: order,
            seed,
            lhs: v,
            rhs: 1.0,
            ratio: v,
        })
        .collect();
    let mut run = RatioRun::new(params, seed, 0, rows);
    run.extra = json!({"xi_max": xi_max});
    Ok(run)
}
