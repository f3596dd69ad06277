use alloc::format;
use alloc::vec::Vec;

use super::{apply_sampled, symbol_amalgam_norm, LocalGrid, Symbol};
use crate::grid::{Exponent, GridFunction, SpectralPlan};
use crate::sampler::{trial_rng, GaborSampler, GaborSuperposition};
use crate::tfnorms::{NormContext, NormSpec, RatioSample};
use crate::{Error, Result};

/// Greedy search around the best random trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineConfig {
    pub rounds: usize,
    pub candidates: usize,
    /// Perturbation scale of the first round; halved every round.
    pub initial_scale: f64,
}

impl Default for RefineConfig {
    fn default() -> Self {
        Self {
            rounds: 3,
            candidates: 10,
            initial_scale: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorTrial {
    pub trial: usize,
    pub seed: u64,
    pub sample: RatioSample,
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorNormReport {
    pub trials: Vec<OperatorTrial>,
    /// Largest `‖H_σ f‖_out / ‖f‖_in` seen, a lower bound for the operator norm.
    pub max_ratio: f64,
    /// `‖σ‖_{W(FL^1, L^∞_γ)}` with `γ` the weight gain `s_out - s_in`.
    pub symbol_norm: f64,
}

impl OperatorNormReport {
    /// `max_ratio ≤ c·‖σ‖`.
    pub fn passes(&self, c: f64) -> bool {
        self.max_ratio <= c * self.symbol_norm
    }
}

/// A multiplier together with the spaces it is measured between.
#[derive(Debug, Clone)]
pub struct OperatorProblem {
    pub symbol: Symbol,
    pub in_spec: NormSpec,
    pub out_spec: NormSpec,
    ctx: NormContext,
    plan: SpectralPlan,
    sampled: GridFunction,
}

impl OperatorProblem {
    /// `out_spec` must be `in_spec` with a different smoothness weight `s`.
    pub fn new(symbol: Symbol, in_spec: NormSpec, out_spec: NormSpec, ctx: NormContext) -> Result<Self> {
        if !in_spec.same_kind(&out_spec) {
            return Err(Error::SpecKindMismatch);
        }
        if out_spec.shifted(in_spec.s() - out_spec.s()) != in_spec {
            return Err(Error::ExponentMismatch(format!(
                "output space {out_spec:?} differs from input {in_spec:?} in more than the weight s"
            )));
        }
        let spec = ctx.spec();
        let sampled = symbol.sample_on(spec)?;
        Ok(Self {
            symbol,
            in_spec,
            out_spec,
            plan: SpectralPlan::new(spec),
            ctx,
            sampled,
        })
    }

    pub fn gain(&self) -> f64 {
        self.out_spec.s() - self.in_spec.s()
    }

    pub fn context(&self) -> &NormContext {
        &self.ctx
    }

    /// `(‖H_σ f‖_out, ‖f‖_in)`.
    pub fn evaluate(&self, f: &GridFunction) -> Result<RatioSample> {
        let hf = apply_sampled(&self.plan, &self.sampled, f)?;
        let lhs = self.ctx.norm(&hf, &self.out_spec)?;
        let rhs = self.ctx.norm(f, &self.in_spec)?;
        Ok(RatioSample::new(lhs, rhs))
    }

    /// Reference bound `‖σ‖_{W(FL^1, L^∞_γ)}` over translates up to `xi_max`.
    pub fn symbol_norm(&self, xi_max: f64) -> Result<f64> {
        let d = self.ctx.spec().d();
        Ok(symbol_amalgam_norm(&self.symbol, Exponent::ONE, self.gain(), xi_max, d, LocalGrid::default_for(d))?.value)
    }
}

/// Random lower bounds for `‖H_σ‖_{in → out}`.
///
/// Trial `t < trials` uses seed `seed + t`. Refinement round `r` perturbs
/// the best sample so far with seed `seed + trials + r`, so a run touches
/// exactly the seeds `seed .. seed + trials + rounds` (no refinement when
/// `trials = 0`).
pub fn estimate_operator_norm(
    problem: &OperatorProblem,
    sampler: &GaborSampler,
    seed: u64,
    trials: usize,
    refine: RefineConfig,
    xi_max: f64,
) -> Result<OperatorNormReport> {
    let mut records = Vec::with_capacity(trials + refine.rounds * refine.candidates);
    let mut best: Option<(f64, GaborSuperposition)> = None;
    for t in 0..trials {
        let atoms = sampler.sample(&mut trial_rng(seed, t as u64));
        let sample = problem.evaluate(&atoms.render(sampler.spec))?;
        records.push(OperatorTrial {
            trial: t,
            seed: seed.wrapping_add(t as u64),
            sample,
            refined: false,
        });
        if best.as_ref().is_none_or(|(r, _)| sample.ratio > *r) {
            best = Some((sample.ratio, atoms));
        }
    }
    if let Some((mut best_ratio, mut best_atoms)) = best {
        let mut scale = refine.initial_scale;
        for round in 0..refine.rounds {
            let round_seed = seed.wrapping_add((trials + round) as u64);
            let mut rng = trial_rng(round_seed, 0);
            let parent = best_atoms.clone();
            for c in 0..refine.candidates {
                let atoms = sampler.perturb(&parent, scale, &mut rng);
                let sample = problem.evaluate(&atoms.render(sampler.spec))?;
                records.push(OperatorTrial {
                    trial: trials + round * refine.candidates + c,
                    seed: round_seed,
                    sample,
                    refined: true,
                });
                if sample.ratio > best_ratio {
                    best_ratio = sample.ratio;
                    best_atoms = atoms;
                }
            }
            scale *= 0.5;
        }
    }
    let max_ratio = records.iter().map(|r| r.sample.ratio).fold(0.0, f64::max);
    Ok(OperatorNormReport {
        trials: records,
        max_ratio,
        symbol_norm: problem.symbol_norm(xi_max)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::tfnorms::{AmalgamSpec, ModulationSpec};

    #[test]
    fn identity_on_m22() {
        let spec = GridSpec::new(1, 64, 8.0).unwrap();
        let m = NormSpec::Modulation(ModulationSpec::new(2.0, 2.0, 0.0).unwrap());
        let p = OperatorProblem::new(Symbol::constant(1.0), m, m, NormContext::new(spec)).unwrap();
        let report = estimate_operator_norm(&p, &GaborSampler::new(spec), 5, 4, RefineConfig::default(), 4.0).unwrap();
        assert_eq!(report.trials.len(), 4 + 30);
        for t in &report.trials {
            assert!((t.sample.ratio - 1.0).abs() < 1e-10);
        }
        assert!((report.symbol_norm - 1.0).abs() < 1e-12);
        assert!(report.passes(1.25));
    }

    #[test]
    fn spec_checks() {
        let spec = GridSpec::new(1, 32, 8.0).unwrap();
        let ctx = NormContext::new(spec);
        let m = NormSpec::Modulation(ModulationSpec::new(2.0, 1.0, 0.0).unwrap());
        let a = NormSpec::Amalgam(AmalgamSpec::new(1.0, 0.0, 2.0, 0.0).unwrap());
        assert_eq!(
            OperatorProblem::new(Symbol::Cos, m, a, ctx.clone()).unwrap_err(),
            Error::SpecKindMismatch
        );
        let other = NormSpec::Modulation(ModulationSpec::new(1.0, 1.0, 1.0).unwrap());
        assert!(matches!(
            OperatorProblem::new(Symbol::Cos, m, other, ctx.clone()),
            Err(Error::ExponentMismatch(_))
        ));
        let shifted = m.shifted(1.0);
        let p = OperatorProblem::new(Symbol::Cos, m, shifted, ctx).unwrap();
        assert_eq!(p.gain(), 1.0);
    }

    #[test]
    fn zero_trials_is_vacuous() {
        let spec = GridSpec::new(1, 32, 8.0).unwrap();
        let m = NormSpec::Modulation(ModulationSpec::new(2.0, 1.0, 0.0).unwrap());
        let p = OperatorProblem::new(Symbol::Cos, m, m, NormContext::new(spec)).unwrap();
        let r = estimate_operator_norm(&p, &GaborSampler::new(spec), 0, 0, RefineConfig::default(), 2.0).unwrap();
        assert!(r.trials.is_empty());
        assert_eq!(r.max_ratio, 0.0);
    }
}
