//! Seeded random Gabor superpositions.
//!
//! A sample is `Σ_j c_j M_{ξ_j} T_{x_j} φ` with `φ(x) = e^{-π|x|²}`,
//! `c_j` complex standard normal (`E|c_j|² = 1`), `x_j` uniform in the
//! inner half `[-l/4, l/4)^d` of the box and `ξ_j` uniform in the inner half
//! `[-n/(4l), n/(4l))^d` of the frequency band.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`). Trial `t` of
//! a run with seed `s` draws from `ChaCha8Rng::seed_from_u64(s + t)` so trials
//! are independent of each other and of scheduling.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::grid::{Domain, GridFunction, GridSpec, Point};

/// Generator for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaborAtom {
    pub coeff: Complex64,
    pub x: Point,
    pub xi: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaborSuperposition {
    pub atoms: Vec<GaborAtom>,
}

impl GaborSuperposition {
    pub fn render(&self, spec: GridSpec) -> GridFunction {
        let d = spec.d();
        let mut out = GridFunction::zeros(spec, Domain::Spatial);
        for atom in &self.atoms {
            for (idx, v) in out.values_mut().iter_mut().enumerate() {
                let x = spec.point(idx, Domain::Spatial);
                let mut r2 = 0.0;
                let mut phase = 0.0;
                for a in 0..d {
                    r2 += (x[a] - atom.x[a]).powi(2);
                    phase += atom.xi[a] * x[a];
                }
                let envelope = (-PI * r2).exp();
                if envelope != 0.0 {
                    let angle = 2.0 * PI * phase;
                    *v += atom.coeff * Complex64::new(angle.cos(), angle.sin()) * envelope;
                }
            }
        }
        out
    }
}

/// Draws superpositions for a fixed grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaborSampler {
    pub spec: GridSpec,
    pub atoms: usize,
    /// Frequencies are drawn from `[-xi_half, xi_half)^d`.
    pub xi_half: f64,
}

impl GaborSampler {
    /// Ten atoms per sample, frequencies in the inner half of the band.
    pub fn new(spec: GridSpec) -> Self {
        Self {
            spec,
            atoms: 10,
            xi_half: spec.band() / 2.0,
        }
    }

    /// Frequencies drawn so that products of `degree` samples stay inside
    /// the band: `degree·xi_half` plus a margin of 6 for the Gaussian
    /// envelope (where `e^{-πξ²}` is below `1e-49`) stays below `n/(2l)`.
    /// Falls back to the inner half of the band when the grid is too coarse.
    pub fn alias_free(spec: GridSpec, degree: usize) -> Self {
        let room = (spec.band() - 6.0) / degree.max(1) as f64;
        let default = Self::new(spec);
        Self {
            xi_half: if room > 0.0 { room.min(default.xi_half) } else { default.xi_half },
            ..default
        }
    }

    pub fn with_atoms(mut self, atoms: usize) -> Self {
        self.atoms = atoms;
        self
    }

    fn x_half(&self) -> f64 {
        self.spec.l() / 4.0
    }

    fn xi_half(&self) -> f64 {
        self.xi_half
    }

    fn point(&self, rng: &mut impl Rng, half: f64) -> Point {
        let mut p = [0.0; 2];
        for c in p.iter_mut().take(self.spec.d()) {
            *c = rng.random_range(-half..half);
        }
        p
    }

    fn normal(rng: &mut impl Rng) -> Complex64 {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * FRAC_1_SQRT_2
    }

    pub fn sample(&self, rng: &mut impl Rng) -> GaborSuperposition {
        let atoms = (0..self.atoms)
            .map(|_| GaborAtom {
                coeff: Self::normal(rng),
                x: self.point(rng, self.x_half()),
                xi: self.point(rng, self.xi_half()),
            })
            .collect();
        GaborSuperposition { atoms }
    }

    /// Jitters every atom by `scale` times the sampling ranges, keeping
    /// positions and frequencies inside them.
    pub fn perturb(&self, base: &GaborSuperposition, scale: f64, rng: &mut impl Rng) -> GaborSuperposition {
        let jitter = |c: f64, half: f64, rng: &mut _| -> f64 {
            let step: f64 = Rng::sample::<f64, _>(rng, StandardNormal) * scale * half;
            (c + step).clamp(-half, half * (1.0 - 1e-12))
        };
        let (xh, xih) = (self.x_half(), self.xi_half());
        let atoms = base
            .atoms
            .iter()
            .map(|a| {
                let mut x = a.x;
                let mut xi = a.xi;
                for k in 0..self.spec.d() {
                    x[k] = jitter(x[k], xh, rng);
                    xi[k] = jitter(xi[k], xih, rng);
                }
                GaborAtom {
                    coeff: a.coeff + Self::normal(rng) * scale,
                    x,
                    xi,
                }
            })
            .collect();
        GaborSuperposition { atoms }
    }

    /// Sample for trial `trial` of the run seeded with `seed`.
    pub fn trial(&self, seed: u64, trial: u64) -> GridFunction {
        self.sample(&mut trial_rng(seed, trial)).render(self.spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_trial() {
        let s = GaborSampler::new(GridSpec::new(1, 64, 8.0).unwrap());
        assert_eq!(s.trial(7, 3), s.trial(7, 3));
        assert_ne!(s.trial(7, 3), s.trial(7, 4));
        assert_eq!(s.trial(7, 3), s.trial(8, 2));
    }

    #[test]
    fn atoms_stay_in_the_inner_half() {
        let spec = GridSpec::new(2, 32, 8.0).unwrap();
        let s = GaborSampler::new(spec);
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let g = s.sample(&mut rng);
            let g = s.perturb(&g, 0.5, &mut rng);
            assert_eq!(g.atoms.len(), 10);
            for a in &g.atoms {
                for k in 0..2 {
                    assert!(a.x[k].abs() <= 2.0);
                    assert!(a.xi[k].abs() <= 1.0);
                }
            }
        }
    }

    #[test]
    fn alias_free_range() {
        let spec = GridSpec::new(1, 1024, 32.0).unwrap();
        assert_eq!(GaborSampler::new(spec).xi_half, 8.0);
        let s = GaborSampler::alias_free(spec, 3);
        assert!((3.0 * s.xi_half + 6.0 - spec.band()).abs() < 1e-12);
        let coarse = GridSpec::new(1, 64, 16.0).unwrap();
        assert_eq!(GaborSampler::alias_free(coarse, 3).xi_half, 1.0);
    }

    #[test]
    fn single_atom_renders_a_gaussian() {
        let spec = GridSpec::new(1, 64, 8.0).unwrap();
        let sup = GaborSuperposition {
            atoms: alloc::vec![GaborAtom {
                coeff: Complex64::new(2.0, 0.0),
                x: [0.5, 0.0],
                xi: [1.0, 0.0],
            }],
        };
        let f = sup.render(spec);
        for (idx, v) in f.values().iter().enumerate() {
            let x = spec.point(idx, Domain::Spatial)[0];
            assert!((v.norm() - 2.0 * (-PI * (x - 0.5).powi(2)).exp()).abs() < 1e-14);
        }
    }
}
