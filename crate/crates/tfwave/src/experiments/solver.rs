//! Wave-equation runs: `solve`, `reference-compare` and the
//! data-to-solution Lipschitz ratios.

use serde_json::{json, Value};
use tfwave_core::grid::{weighted_lp_norm, Exponent, GridFunction, GridSpec, Weight};
use tfwave_core::nlw::{
    picard_solve, picard_solve_bisecting, reference_solve, BisectionOutcome, Nonlinearity, PicardDiagnostics,
    Quadrature, SolverConfig,
};
use tfwave_core::sampler::{trial_rng, GaborSampler};
use tfwave_core::tfnorms::{AmalgamSpec, ModulationSpec, NormContext, NormSpec, RatioSample};
use tfwave_core::{Complex64, Error as CoreError};

use super::data::{exp_json, exp_value, exponent, grid_json, load_shape, load_shape_on, sampler_json};
use super::ratio::{par_rows, RatioRun};
use super::Outcome;
use crate::config::{ExperimentConfig, Kind, QuadratureArg, Theorem};
use crate::error::{HarnessError, HarnessResult};
use crate::report::{write_json, write_table, OutputPaths};
use crate::specs::format_norm_spec;
use crate::trajectory::write_trajectory;

/// Largest accepted ratio of consecutive Picard differences.
pub const CONTRACTION_BOUND: f64 = 0.6;
pub const DEFAULT_AMPLITUDE: f64 = 0.1;
pub const DEFAULT_GAP_TOLERANCE: f64 = 1e-5;

/// A configured initial value problem.
struct Problem {
    ctx: NormContext,
    u0: GridFunction,
    u1: GridFunction,
    f: Nonlinearity,
    solver: SolverConfig,
    /// Space of `u1`: the monitor space with `s - 1`.
    velocity: NormSpec,
    params: Value,
}

fn theorem_name(t: Theorem) -> &'static str {
    match t {
        Theorem::T1 => "t1",
        Theorem::T2 => "t2",
        Theorem::T3 => "t3",
    }
}

/// Monitor norm per theorem: `M^{p,1}_s`, `M^{p,q}_s` with `q' > 2kd`, or
/// `W(FL^q_s, L^p_γ)`.
fn monitor_for(theorem: Theorem, p: f64, q: f64, s: f64, gamma: f64, k: u32, d: usize) -> HarnessResult<NormSpec> {
    Ok(match theorem {
        Theorem::T1 => NormSpec::Modulation(ModulationSpec::new(p, 1.0, s)?),
        Theorem::T2 => {
            let q_conj = exponent(q)?.conjugate();
            let need = 2.0 * k as f64 * d as f64;
            if !(q_conj.value() > need) {
                return Err(HarnessError::Config(format!(
                    "theorem t2 needs q' > 2kd = {need}, got q' = {}",
                    q_conj.value()
                )));
            }
            NormSpec::Modulation(ModulationSpec::new(p, q, s)?)
        }
        Theorem::T3 => NormSpec::Amalgam(AmalgamSpec::new(q, s, p, gamma)?),
    })
}

fn problem(cfg: &ExperimentConfig, n1: usize, l1: f64) -> HarnessResult<Problem> {
    let theorem = cfg.theorem.unwrap_or(Theorem::T1);
    let p = exp_value(cfg.p, 2.0);
    let q = exp_value(cfg.q, 1.0);
    let s = cfg.s.unwrap_or(0.0);
    let gamma = cfg.gamma.unwrap_or(0.0);
    let k = cfg.k.unwrap_or(1);
    let lambda = cfg.lambda.unwrap_or(1.0);
    let seed = cfg.seed.unwrap_or(super::DEFAULT_SEED);

    let f_name = cfg.f.as_deref().unwrap_or("gaussian");
    let shape = load_shape(f_name, cfg, n1, l1, seed)?;
    let spec = shape.f.spec();
    let monitor = monitor_for(theorem, p, q, s, gamma, k, spec.d())?;
    let velocity = monitor.shifted(-1.0);
    let ctx = NormContext::new(spec);

    let amplitude = match (cfg.amplitude, shape.scalable) {
        (Some(a), _) => Some(a),
        (None, true) => Some(DEFAULT_AMPLITUDE),
        (None, false) => None,
    };
    let u0 = match amplitude {
        Some(a) => {
            let size = ctx.norm(&shape.f, &monitor)?;
            if size == 0.0 {
                shape.f
            } else {
                shape.f.scale(Complex64::new(a / size, 0.0))
            }
        }
        None => shape.f,
    };
    let f1_name = cfg.f1.as_deref().unwrap_or("zero");
    let u1 = load_shape_on(f1_name, spec, seed.wrapping_add(1))?.f;

    let mut solver = SolverConfig::new(cfg.t_final.unwrap_or(0.1), cfg.nt.unwrap_or(33), cfg.tol.unwrap_or(1e-10), monitor);
    if let Some(m) = cfg.max_iter {
        solver.max_iter = m;
    }
    solver.quadrature = match cfg.quadrature.unwrap_or(QuadratureArg::Trapezoid) {
        QuadratureArg::Trapezoid => Quadrature::Trapezoid,
        QuadratureArg::Simpson => Quadrature::Simpson,
    };
    solver.data_radius = Some(ctx.norm(&u0, &monitor)? + ctx.norm(&u1, &velocity)?);
    solver.validate()?;

    let params = json!({
        "grid": grid_json(spec),
        "theorem": theorem_name(theorem),
        "monitor": format_norm_spec(&monitor),
        "velocity_space": format_norm_spec(&velocity),
        "k": k,
        "lambda": lambda,
        "f": f_name,
        "f1": f1_name,
        "amplitude": amplitude,
        "T": solver.t_final,
        "nt": solver.n_t,
        "tol": solver.tol,
        "max_iter": solver.max_iter,
        "quadrature": match solver.quadrature {
            Quadrature::Trapezoid => "trapezoid",
            Quadrature::Simpson => "simpson",
        },
        "p": exp_json(p),
        "q": exp_json(q),
        "s": s,
        "gamma": gamma,
    });
    Ok(Problem {
        ctx,
        u0,
        u1,
        f: Nonlinearity::power_law(lambda, k),
        solver,
        velocity,
        params,
    })
}

fn diagnostics_json(d: &PicardDiagnostics, bisections: usize) -> Value {
    json!({
        "iterations": d.iterations,
        "differences": d.differences,
        "ratios": d.ratios,
        "max_ratio": d.max_ratio(),
        "rounding_floor": d.rounding_floor,
        "linear_norm": d.linear_norm,
        "solution_norm": d.solution_norm,
        "t_final": d.t_final,
        "bisections": bisections,
        "data_radius": d.data_radius,
        "geometric": d.geometric(CONTRACTION_BOUND),
        "within_twice_linear": d.within_twice_linear(),
    })
}

fn picard_pass(d: &PicardDiagnostics) -> bool {
    d.geometric(CONTRACTION_BOUND) && d.within_twice_linear() && d.within_ball()
}

/// Runs the bisecting solver; a contraction failure is a failed check,
/// not a runtime error.
fn solve_or_fail(pr: &Problem) -> HarnessResult<Result<BisectionOutcome, String>> {
    match picard_solve_bisecting(&pr.u0, &pr.u1, &pr.f, &pr.solver, &pr.ctx) {
        Ok(o) => Ok(Ok(o)),
        Err(e @ CoreError::ContractionFailure { .. }) => Ok(Err(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn failed(kind: Kind, pr: &Problem, message: String, out: Option<&OutputPaths>) -> HarnessResult<Outcome> {
    let report = json!({
        "kind": kind.name(),
        "params": pr.params,
        "error": message,
        "pass": false,
    });
    if let Some(o) = out {
        write_json(&o.json(), &report)?;
    }
    Ok(Outcome { kind, pass: false, report })
}

pub fn solve(cfg: &ExperimentConfig, out: Option<&OutputPaths>) -> HarnessResult<Outcome> {
    let pr = problem(cfg, 128, 16.0)?;
    let outcome = match solve_or_fail(&pr)? {
        Ok(o) => o,
        Err(msg) => return failed(Kind::Solve, &pr, msg, out),
    };
    let sol = &outcome.solution;
    let pass = picard_pass(&sol.diagnostics);
    let diagnostics = json!({
        "kind": Kind::Solve.name(),
        "params": pr.params,
        "picard": diagnostics_json(&sol.diagnostics, outcome.bisections),
        "pass": pass,
    });
    let report = match out {
        Some(o) => {
            let manifest = write_trajectory(o, &sol.trajectory, diagnostics)?;
            let rows: Vec<Vec<String>> = (0..sol.trajectory.len())
                .map(|i| {
                    vec![
                        i.to_string(),
                        sol.trajectory.times[i].to_string(),
                        sol.trajectory.norms[i].to_string(),
                        sol.linear.norms[i].to_string(),
                    ]
                })
                .collect();
            write_table(&o.csv(), &["node", "t", "norm", "linear_norm"], &rows)?;
            serde_json::to_value(&manifest)?
        }
        None => json!({
            "times": sol.trajectory.times,
            "norms": sol.trajectory.norms,
            "diagnostics": diagnostics,
        }),
    };
    Ok(Outcome {
        kind: Kind::Solve,
        pass,
        report,
    })
}

fn l2(f: &GridFunction) -> f64 {
    weighted_lp_norm(f, Exponent::TWO, Weight::unweighted())
}

pub fn reference_compare(cfg: &ExperimentConfig, out: Option<&OutputPaths>) -> HarnessResult<Outcome> {
    let kind = Kind::ReferenceCompare;
    let pr = problem(cfg, 128, 16.0)?;
    let outcome = match solve_or_fail(&pr)? {
        Ok(o) => o,
        Err(msg) => return failed(kind, &pr, msg, out),
    };
    let sol = &outcome.solution;
    let t_final = sol.diagnostics.t_final;
    let picard_dt = t_final / (pr.solver.n_t - 1) as f64;
    let requested = cfg.dt.unwrap_or(picard_dt / 4.0);
    if !(requested > 0.0) {
        return Err(HarnessError::Config(format!("reference step must be positive, got {requested}")));
    }
    // The reference step divides the Picard step so every Picard node is
    // also a reference node.
    let save_every = ((picard_dt / requested) - 1e-9).ceil().max(1.0) as usize;
    let dt = picard_dt / save_every as f64;
    let reference = reference_solve(&pr.u0, &pr.u1, &pr.f, dt, t_final, save_every)?;
    let rt = &reference.trajectory;
    if rt.len() != sol.trajectory.len() {
        return Err(HarnessError::Calibration(format!(
            "reference kept {} nodes, Picard has {}",
            rt.len(),
            sol.trajectory.len()
        )));
    }
    let mut gaps = Vec::with_capacity(rt.len());
    for (i, (t, u)) in sol.trajectory.times.iter().zip(&sol.trajectory.states).enumerate() {
        if (rt.times[i] - t).abs() > 1e-9 * t.abs().max(1.0) {
            return Err(HarnessError::Calibration(format!(
                "node {i}: reference time {} against Picard time {t}",
                rt.times[i]
            )));
        }
        gaps.push(l2(&u.sub(&rt.states[i])?));
    }
    let gap = gaps.iter().copied().fold(0.0, f64::max);
    let tolerance = cfg.tolerance.unwrap_or(DEFAULT_GAP_TOLERANCE);
    let pass = gap < tolerance && picard_pass(&sol.diagnostics);
    let report = json!({
        "kind": kind.name(),
        "params": pr.params,
        "picard": diagnostics_json(&sol.diagnostics, outcome.bisections),
        "reference_dt": dt,
        "save_every": save_every,
        "gap": gap,
        "tolerance": tolerance,
        "pass": pass,
    });
    if let Some(o) = out {
        let rows: Vec<Vec<String>> = gaps
            .iter()
            .enumerate()
            .map(|(i, g)| vec![i.to_string(), sol.trajectory.times[i].to_string(), g.to_string()])
            .collect();
        write_table(&o.csv(), &["node", "t", "gap"], &rows)?;
        write_json(&o.json(), &report)?;
    }
    Ok(Outcome { kind, pass, report })
}

pub const DEFAULT_EPSILON: f64 = 1e-3;

/// Ratios `‖u - ũ‖_T / (‖Δu0‖ + ‖Δu1‖)` between the solution for the
/// configured data and solutions for randomly perturbed data, with
/// perturbations of relative size `epsilon`. Both solves use the same `T`.
pub fn solution_lipschitz(cfg: &ExperimentConfig, seed: u64, trials: usize) -> HarnessResult<RatioRun> {
    let pr = problem(cfg, 256, 16.0)?;
    let spec: GridSpec = pr.ctx.spec();
    let epsilon = cfg.epsilon.unwrap_or(DEFAULT_EPSILON);
    if !(epsilon > 0.0) {
        return Err(HarnessError::Config(format!("epsilon must be positive, got {epsilon}")));
    }
    let k = cfg.k.unwrap_or(1) as usize;
    let sampler = GaborSampler::alias_free(spec, 2 * k + 1);
    let monitor = pr.solver.monitor;
    let scale = epsilon * pr.solver.data_radius.unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let base = picard_solve(&pr.u0, &pr.u1, &pr.f, &pr.solver, &pr.ctx)?;

    let mut params = pr.params.clone();
    params["epsilon"] = json!(epsilon);
    params["sampler"] = sampler_json(&sampler);

    let rows = par_rows(seed, trials, |t| {
        let mut rng = trial_rng(seed, t);
        let mut direction = |space: &NormSpec| -> HarnessResult<GridFunction> {
            let g = sampler.sample(&mut rng).render(spec);
            let size = pr.ctx.norm(&g, space)?;
            Ok(g.scale(Complex64::new(scale / size, 0.0)))
        };
        let du0 = direction(&monitor)?;
        let du1 = direction(&pr.velocity)?;
        let v0 = pr.u0.add(&du0)?;
        let v1 = pr.u1.add(&du1)?;
        let other = picard_solve(&v0, &v1, &pr.f, &pr.solver, &pr.ctx)?;
        let lhs = base.trajectory.distance(&other.trajectory, &pr.ctx, &monitor)?;
        let rhs = pr.ctx.norm(&du0, &monitor)? + pr.ctx.norm(&du1, &pr.velocity)?;
        Ok(RatioSample::new(lhs, rhs))
    })?;
    let mut run = RatioRun::new(params, seed, trials, rows);
    run.extra = json!({"base": diagnostics_json(&base.diagnostics, 0)});
    Ok(run)
}
