use alloc::vec::Vec;

use super::{apply_nonlinearity, check_data, propagate_linear, DuhamelOperator, Nonlinearity, Quadrature, Trajectory};
use crate::grid::GridFunction;
use crate::tfnorms::{NormContext, NormSpec};
use crate::{Error, Result};

/// Successive differences larger than this mean the iteration diverges.
const DIVERGENCE: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Final time `T ≤ 1`.
    pub t_final: f64,
    /// Number of time nodes, including `t = 0` and `t = T`.
    pub n_t: usize,
    /// Stop once `sup_i ‖u^{m+1}(t_i) - u^m(t_i)‖ < tol`.
    pub tol: f64,
    pub max_iter: usize,
    pub monitor: NormSpec,
    pub quadrature: Quadrature,
    /// Radius of the data ball, reported only.
    pub data_radius: Option<f64>,
    /// Radius of the contraction ball, checked against `‖u‖_T` when set.
    pub ball_radius: Option<f64>,
    /// How often `T` may be halved after a contraction failure.
    pub max_bisections: usize,
}

impl SolverConfig {
    pub fn new(t_final: f64, n_t: usize, tol: f64, monitor: NormSpec) -> Self {
        Self {
            t_final,
            n_t,
            tol,
            max_iter: 50,
            monitor,
            quadrature: Quadrature::Trapezoid,
            data_radius: None,
            ball_radius: None,
            max_bisections: 6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0 && self.t_final <= 1.0) {
            return Err(Error::InvalidConfig("final time must lie in (0, 1]"));
        }
        if self.n_t < 2 {
            return Err(Error::InvalidConfig("need at least two time nodes"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("need at least one Picard iteration"));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.t_final / (self.n_t - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_t).map(|i| i as f64 * self.dt()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardDiagnostics {
    pub iterations: usize,
    /// `δ_m = sup_i ‖u^{m+1}(t_i) - u^m(t_i)‖`.
    pub differences: Vec<f64>,
    /// `δ_{m+1}/δ_m` for consecutive differences above the rounding floor.
    pub ratios: Vec<f64>,
    /// Differences below this are rounding noise and excluded from `ratios`.
    pub rounding_floor: f64,
    pub linear_norm: f64,
    pub solution_norm: f64,
    pub t_final: f64,
    pub data_radius: Option<f64>,
    pub ball_radius: Option<f64>,
}

impl PicardDiagnostics {
    /// Largest ratio of consecutive differences, `0` when there are none.
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }

    /// Every ratio is at most `bound`.
    pub fn geometric(&self, bound: f64) -> bool {
        self.ratios.iter().all(|&r| r <= bound)
    }

    /// `‖u‖_T ≤ 2‖u_lin‖_T`.
    pub fn within_twice_linear(&self) -> bool {
        self.solution_norm <= 2.0 * self.linear_norm
    }

    /// `‖u‖_T ≤ μ`, vacuous when no ball radius was given.
    pub fn within_ball(&self) -> bool {
        self.ball_radius.is_none_or(|mu| self.solution_norm <= mu)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardSolution {
    pub trajectory: Trajectory,
    pub linear: Trajectory,
    pub diagnostics: PicardDiagnostics,
}

fn sup_norm_of(states: &[GridFunction], ctx: &NormContext, spec: &NormSpec) -> Result<Vec<f64>> {
    states.iter().map(|u| ctx.norm(u, spec)).collect()
}

/// Solves `u = u_lin + B F(u)` by fixed-point iteration from `u^0 = u_lin`.
pub fn picard_solve(
    u0: &GridFunction,
    u1: &GridFunction,
    f: &Nonlinearity,
    cfg: &SolverConfig,
    ctx: &NormContext,
) -> Result<PicardSolution> {
    cfg.validate()?;
    check_data(u0, u1)?;
    if ctx.spec() != u0.spec() {
        return Err(Error::SpecMismatch);
    }
    let times = cfg.times();
    let lin: Vec<GridFunction> = times
        .iter()
        .map(|&t| propagate_linear(u0, u1, t))
        .collect::<Result<_>>()?;
    let lin_norms = sup_norm_of(&lin, ctx, &cfg.monitor)?;
    let linear_norm = lin_norms.iter().copied().fold(0.0, f64::max);
    let duhamel = DuhamelOperator::new(u0.spec(), cfg.dt(), cfg.n_t, cfg.quadrature);

    let mut u = lin.clone();
    let mut differences = Vec::new();
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let forces: Vec<GridFunction> = u.iter().map(|ui| apply_nonlinearity(f, ui)).collect();
        let b = duhamel.apply_all(&forces)?;
        let next: Vec<GridFunction> = lin.iter().zip(&b).map(|(l, bi)| l.add(bi)).collect::<Result<_>>()?;
        let mut delta: f64 = 0.0;
        for (a, prev) in next.iter().zip(&u) {
            delta = delta.max(ctx.norm(&a.sub(prev)?, &cfg.monitor)?);
        }
        u = next;
        differences.push(delta);
        if delta < cfg.tol {
            converged = true;
            break;
        }
        if !(delta <= DIVERGENCE) {
            break;
        }
    }
    let iterations = differences.len();
    if !converged {
        return Err(Error::ContractionFailure {
            iterations,
            last_difference: differences.last().copied().unwrap_or(f64::NAN),
        });
    }
    let norms = sup_norm_of(&u, ctx, &cfg.monitor)?;
    let solution_norm = norms.iter().copied().fold(0.0, f64::max);
    let rounding_floor = 1e-12 * linear_norm.max(1e-300);
    let ratios = differences
        .windows(2)
        .filter(|w| w[1] > rounding_floor)
        .map(|w| w[1] / w[0])
        .collect();
    Ok(PicardSolution {
        trajectory: Trajectory {
            times: times.clone(),
            states: u,
            norms,
        },
        linear: Trajectory {
            times,
            states: lin,
            norms: lin_norms,
        },
        diagnostics: PicardDiagnostics {
            iterations,
            differences,
            ratios,
            rounding_floor,
            linear_norm,
            solution_norm,
            t_final: cfg.t_final,
            data_radius: cfg.data_radius,
            ball_radius: cfg.ball_radius,
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BisectionOutcome {
    pub solution: PicardSolution,
    /// How often `T` was halved before the iteration contracted.
    pub bisections: usize,
}

/// [`picard_solve`], halving `T` after each contraction failure up to
/// `cfg.max_bisections` times. The solution reports the largest `T` that
/// worked.
pub fn picard_solve_bisecting(
    u0: &GridFunction,
    u1: &GridFunction,
    f: &Nonlinearity,
    cfg: &SolverConfig,
    ctx: &NormContext,
) -> Result<BisectionOutcome> {
    let mut attempt = *cfg;
    let mut bisections = 0;
    loop {
        match picard_solve(u0, u1, f, &attempt, ctx) {
            Ok(solution) => return Ok(BisectionOutcome { solution, bisections }),
            Err(Error::ContractionFailure { .. }) if bisections < cfg.max_bisections => {
                attempt.t_final *= 0.5;
                bisections += 1;
            }
            Err(e) => return Err(e),
        }
    }
}
