//! The nonlinear wave equation `∂_t²u - Δu = F(u)`, `u(0) = u_0`,
//! `∂_t u(0) = u_1`, in integral form
//! `u(t) = K'(t)u_0 + K(t)u_1 + ∫_0^t K(t-τ) F(u(τ)) dτ`
//! with `K'(t) = cos(2πt|ξ|)` and `K(t) = sin(2πt|ξ|)/(2π|ξ|)`.

mod duhamel;
mod picard;
mod reference;

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::{Domain, GridFunction, SpectralPlan};
use crate::multipliers::{apply_multiplier, Symbol};
use crate::tfnorms::{NormContext, NormSpec};
use crate::{Error, Result};

pub use duhamel::{duhamel, DuhamelOperator, Quadrature};
pub use picard::{picard_solve, picard_solve_bisecting, BisectionOutcome, PicardDiagnostics, PicardSolution, SolverConfig};
pub use reference::{reference_solve, ReferenceSolution};

/// Pointwise nonlinearity with `F(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Nonlinearity {
    /// `λ|u|^{2k}u = λ u^{k+1} ū^k`.
    PowerLaw { lambda: Complex64, k: u32 },
    Series(SeriesNonlinearity),
}

/// `Σ c_{j,k} z^j z̄^k`, truncated to total degree `j + k ≤ truncation`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesNonlinearity {
    terms: Vec<(u32, u32, Complex64)>,
    truncation: u32,
}

impl SeriesNonlinearity {
    pub const DEFAULT_TRUNCATION: u32 = 9;

    /// Terms `(j, k, c_{j,k})`; a nonzero constant term is rejected.
    pub fn new(terms: Vec<(u32, u32, Complex64)>, truncation: u32) -> Result<Self> {
        if terms.iter().any(|&(j, k, c)| j == 0 && k == 0 && c != Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidConfig("series nonlinearity needs F(0) = 0"));
        }
        Ok(Self { terms, truncation })
    }

    pub fn terms(&self) -> &[(u32, u32, Complex64)] {
        &self.terms
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// `Σ_{j+k > J} |c_{j,k}| ρ^{j+k}` over the stored terms beyond the
    /// truncation, which bounds `|F(z) - F_J(z)|` on `|z| ≤ ρ` when those
    /// are all the nonzero coefficients.
    pub fn tail_bound(&self, rho: f64) -> f64 {
        self.terms
            .iter()
            .filter(|(j, k, _)| j + k > self.truncation)
            .map(|&(j, k, c)| c.norm() * rho.powi((j + k) as i32))
            .sum()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.terms
            .iter()
            .filter(|(j, k, _)| j + k <= self.truncation)
            .map(|&(j, k, c)| c * z.powu(j) * zb.powu(k))
            .sum()
    }
}

impl Nonlinearity {
    pub fn power_law(lambda: f64, k: u32) -> Self {
        Nonlinearity::PowerLaw {
            lambda: Complex64::new(lambda, 0.0),
            k,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Nonlinearity::PowerLaw { lambda, .. } => *lambda == Complex64::new(0.0, 0.0),
            Nonlinearity::Series(s) => s.terms.iter().all(|t| t.2 == Complex64::new(0.0, 0.0)),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Nonlinearity::PowerLaw { lambda, k } => lambda * z * z.norm_sqr().powi(*k as i32),
            Nonlinearity::Series(s) => s.eval(z),
        }
    }
}

pub fn apply_nonlinearity(f: &Nonlinearity, u: &GridFunction) -> GridFunction {
    let mut out = u.clone();
    for v in out.values_mut() {
        *v = f.eval(*v);
    }
    out
}

fn check_data(u0: &GridFunction, u1: &GridFunction) -> Result<()> {
    u0.ensure_domain(Domain::Spatial)?;
    u0.ensure_compatible(u1)
}

/// `K'(t)u_0 + K(t)u_1`.
pub fn propagate_linear(u0: &GridFunction, u1: &GridFunction, t: f64) -> Result<GridFunction> {
    check_data(u0, u1)?;
    apply_multiplier(&Symbol::WaveCos { t }, u0)?.add(&apply_multiplier(&Symbol::WaveSinc { t }, u1)?)
}

/// `∂_t` of the linear solution: `-2π|ξ| sin(2πt|ξ|) û_0 + cos(2πt|ξ|) û_1`.
pub fn linear_velocity(u0: &GridFunction, u1: &GridFunction, t: f64) -> Result<GridFunction> {
    check_data(u0, u1)?;
    let spec = u0.spec();
    let plan = SpectralPlan::new(spec);
    let a = plan.forward(u0)?;
    let b = plan.forward(u1)?;
    let mut out = GridFunction::zeros(spec, Domain::Frequency);
    for (idx, v) in out.values_mut().iter_mut().enumerate() {
        let w = 2.0 * PI * spec.radius_sq(idx, Domain::Frequency).sqrt();
        *v = a.values()[idx] * (-w * (w * t).sin()) + b.values()[idx] * (w * t).cos();
    }
    plan.inverse(&out)
}

/// `‖v‖₂² + ‖∇u‖₂²`, the gradient term through Parseval.
pub fn linear_energy(u: &GridFunction, v: &GridFunction) -> Result<f64> {
    check_data(u, v)?;
    let spec = u.spec();
    let uhat = SpectralPlan::new(spec).forward(u)?;
    let grad: f64 = uhat
        .values()
        .iter()
        .enumerate()
        .map(|(idx, c)| 4.0 * PI * PI * spec.radius_sq(idx, Domain::Frequency) * c.norm_sqr())
        .sum::<f64>()
        * spec.cell(Domain::Frequency);
    let kinetic: f64 = v.values().iter().map(|c| c.norm_sqr()).sum::<f64>() * spec.cell(Domain::Spatial);
    Ok(kinetic + grad)
}

/// Solution samples on a time grid with per-node monitor norms.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<GridFunction>,
    pub norms: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `sup_i ‖states[i]‖`.
    pub fn sup_norm(&self) -> f64 {
        self.norms.iter().copied().fold(0.0, f64::max)
    }

    /// `sup_i ‖a_i - b_i‖` in `spec` over nodes with matching times.
    pub fn distance(&self, other: &Trajectory, ctx: &NormContext, spec: &NormSpec) -> Result<f64> {
        let pairs = self.matched_nodes(other)?;
        let mut worst: f64 = 0.0;
        for (i, j) in pairs {
            worst = worst.max(ctx.norm(&self.states[i].sub(&other.states[j])?, spec)?);
        }
        Ok(worst)
    }

    /// `sup_i ‖a_i - b_i‖_{L²}` over nodes with matching times.
    pub fn l2_distance(&self, other: &Trajectory) -> Result<f64> {
        let pairs = self.matched_nodes(other)?;
        let mut worst: f64 = 0.0;
        for (i, j) in pairs {
            let diff = self.states[i].sub(&other.states[j])?;
            worst = worst.max(crate::grid::weighted_lp_norm(
                &diff,
                crate::grid::Exponent::TWO,
                crate::grid::Weight::unweighted(),
            ));
        }
        Ok(worst)
    }

    /// Index pairs of nodes of `self` and `other` at the same time; every
    /// node of `self` must have a partner.
    fn matched_nodes(&self, other: &Trajectory) -> Result<Vec<(usize, usize)>> {
        let mut pairs = Vec::with_capacity(self.len());
        let mut j = 0;
        for (i, &t) in self.times.iter().enumerate() {
            let tol = 1e-9 * t.abs().max(1.0);
            while j < other.times.len() && other.times[j] < t - tol {
                j += 1;
            }
            if j == other.times.len() || (other.times[j] - t).abs() > tol {
                return Err(Error::InvalidConfig("trajectories do not share their time nodes"));
            }
            pairs.push((i, j));
        }
        Ok(pairs)
    }
}

/// Checks the exponent of the Lipschitz estimate for `λ|u|^{2k}u`:
/// `r = q/(2k(1 - q) + 1)`, which must lie in `[1, ∞]`.
pub fn lipschitz_exponent(q: f64, k: u32) -> Result<f64> {
    let denom = 2.0 * k as f64 * (1.0 - q) + 1.0;
    let r = if denom == 0.0 { f64::INFINITY } else { q / denom };
    if r.is_nan() || r < 1.0 {
        return Err(Error::ExponentMismatch(format!(
            "r = q/(2k(1-q)+1) = {r} for q = {q}, k = {k} is outside [1, ∞]"
        )));
    }
    Ok(r)
}

/// `‖F(u) - F(v)‖_{M^{p,r}_{s-1}} / (‖u - v‖_{M^{p,q}_{s-1}} (‖u‖^{2k} + ‖v‖^{2k}))`
/// with the data norms in `M^{p,q}_{s-1}` and `r` from [`lipschitz_exponent`].
pub fn lipschitz_probe(
    f: &Nonlinearity,
    u: &GridFunction,
    v: &GridFunction,
    p: f64,
    q: f64,
    s: f64,
    ctx: &NormContext,
) -> Result<crate::tfnorms::RatioSample> {
    let Nonlinearity::PowerLaw { k, .. } = f else {
        return Err(Error::InvalidConfig("the Lipschitz probe needs a power-law nonlinearity"));
    };
    let r = lipschitz_exponent(q, *k)?;
    let out = NormSpec::Modulation(crate::tfnorms::ModulationSpec::new(p, r, s - 1.0)?);
    let data = NormSpec::Modulation(crate::tfnorms::ModulationSpec::new(p, q, s - 1.0)?);
    let diff = apply_nonlinearity(f, u).sub(&apply_nonlinearity(f, v))?;
    let lhs = ctx.norm(&diff, &out)?;
    let e = 2 * *k as i32;
    let rhs = ctx.norm(&u.sub(v)?, &data)? * (ctx.norm(u, &data)?.powi(e) + ctx.norm(v, &data)?.powi(e));
    Ok(crate::tfnorms::RatioSample::new(lhs, rhs))
}
