#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::{apply_nonlinearity, check_data, Nonlinearity, Trajectory};
use crate::grid::{weighted_lp_norm, Domain, Exponent, GridFunction, GridSpec, SpectralPlan, Weight};
use crate::{Error, Result};

/// Sup norm beyond which the integration is declared unstable.
const BLOWUP: f64 = 1e6;

/// Positions and velocities from [`reference_solve`]; trajectory norms are
/// `L²` norms.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub trajectory: Trajectory,
    pub velocities: Vec<GridFunction>,
}

struct Rhs<'a> {
    plan: SpectralPlan,
    /// `-4π²|ξ|²`.
    laplacian: Vec<f64>,
    f: &'a Nonlinearity,
    spec: GridSpec,
}

impl Rhs<'_> {
    /// `(u, v)' = (v, Δu + F(u))`.
    fn eval(&self, u: &GridFunction, v: &GridFunction) -> Result<(GridFunction, GridFunction)> {
        let mut buf = u.values().to_vec();
        self.plan.forward_in_place(&mut buf);
        for (b, l) in buf.iter_mut().zip(&self.laplacian) {
            *b *= l;
        }
        self.plan.inverse_in_place(&mut buf);
        let lap = GridFunction::from_values(self.spec, Domain::Spatial, buf)?;
        Ok((v.clone(), lap.add(&apply_nonlinearity(self.f, u))?))
    }
}

fn step_state(base: &GridFunction, h: f64, k: &GridFunction) -> Result<GridFunction> {
    let mut out = base.clone();
    out.axpy(Complex64::new(h, 0.0), k)?;
    Ok(out)
}

/// Classical fourth-order Runge-Kutta for `u_tt = Δu + F(u)` with the
/// Laplacian applied spectrally. The step is `T/⌈T/dt⌉`; every
/// `save_every`-th step is kept, and always the last one.
pub fn reference_solve(
    u0: &GridFunction,
    u1: &GridFunction,
    f: &Nonlinearity,
    dt: f64,
    t_final: f64,
    save_every: usize,
) -> Result<ReferenceSolution> {
    check_data(u0, u1)?;
    if !(t_final > 0.0 && dt > 0.0 && dt <= t_final / 10.0 * (1.0 + 1e-12)) {
        return Err(Error::InvalidConfig("reference step must satisfy 0 < dt <= T/10"));
    }
    if save_every == 0 {
        return Err(Error::InvalidConfig("save_every must be positive"));
    }
    let spec = u0.spec();
    let rhs = Rhs {
        plan: SpectralPlan::new(spec),
        laplacian: (0..spec.len())
            .map(|idx| -4.0 * PI * PI * spec.radius_sq(idx, Domain::Frequency))
            .collect(),
        f,
        spec,
    };
    let steps = (t_final / dt - 1e-9).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    let l2 = |g: &GridFunction| weighted_lp_norm(g, Exponent::TWO, Weight::unweighted());

    let (mut u, mut v) = (u0.clone(), u1.clone());
    let mut times = alloc::vec![0.0];
    let mut norms = alloc::vec![l2(&u)];
    let mut states = alloc::vec![u.clone()];
    let mut velocities = alloc::vec![v.clone()];
    for n in 1..=steps {
        let (k1u, k1v) = rhs.eval(&u, &v)?;
        let (k2u, k2v) = rhs.eval(&step_state(&u, h / 2.0, &k1u)?, &step_state(&v, h / 2.0, &k1v)?)?;
        let (k3u, k3v) = rhs.eval(&step_state(&u, h / 2.0, &k2u)?, &step_state(&v, h / 2.0, &k2v)?)?;
        let (k4u, k4v) = rhs.eval(&step_state(&u, h, &k3u)?, &step_state(&v, h, &k3v)?)?;
        for (state, ks) in [(&mut u, [&k1u, &k2u, &k3u, &k4u]), (&mut v, [&k1v, &k2v, &k3v, &k4v])] {
            for (k, c) in ks.into_iter().zip([1.0, 2.0, 2.0, 1.0]) {
                state.axpy(Complex64::new(h * c / 6.0, 0.0), k)?;
            }
        }
        let t = n as f64 * h;
        let size = u.sup_norm().max(v.sup_norm());
        if !(size <= BLOWUP) {
            return Err(Error::BlowupDetected { time: t });
        }
        if n % save_every == 0 || n == steps {
            times.push(t);
            norms.push(l2(&u));
            states.push(u.clone());
            velocities.push(v.clone());
        }
    }
    Ok(ReferenceSolution {
        trajectory: Trajectory { times, states, norms },
        velocities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlw::linear_energy;

    #[test]
    fn plane_wave_eigenmode() {
        let spec = GridSpec::new(1, 32, 8.0).unwrap();
        let k = 2;
        let w = 2.0 * PI * k as f64 / spec.l();
        let u0 = GridFunction::plane_wave(spec, [k, 0]);
        let zero = GridFunction::zeros(spec, Domain::Spatial);
        let sol = reference_solve(&u0, &zero, &Nonlinearity::power_law(0.0, 1), 1e-3, 1.0, 100).unwrap();
        assert_eq!(sol.trajectory.len(), 11);
        for (t, u) in sol.trajectory.times.iter().zip(&sol.trajectory.states) {
            let expect = u0.scale(Complex64::new((w * t).cos(), 0.0));
            assert!(u.sub(&expect).unwrap().sup_norm() < 1e-8);
        }
    }

    #[test]
    fn rejects_coarse_steps_and_blowup() {
        let spec = GridSpec::new(1, 16, 8.0).unwrap();
        let u0 = GridFunction::constant(spec, Complex64::new(3.0, 0.0));
        let zero = GridFunction::zeros(spec, Domain::Spatial);
        let f = Nonlinearity::power_law(1.0, 1);
        assert!(matches!(reference_solve(&u0, &zero, &f, 0.2, 1.0, 1), Err(Error::InvalidConfig(_))));
        // u'' = u³ from u = 3 blows up near t ≈ 0.47.
        assert!(matches!(
            reference_solve(&u0, &zero, &f, 1e-3, 1.0, 1),
            Err(Error::BlowupDetected { .. })
        ));
    }

    #[test]
    fn linear_energy_is_conserved() {
        let spec = GridSpec::new(1, 128, 16.0).unwrap();
        let u0 = GridFunction::from_real_fn(spec, Domain::Spatial, |x| (-PI * x[0] * x[0]).exp());
        let u1 = GridFunction::from_real_fn(spec, Domain::Spatial, |x| x[0] * (-PI * x[0] * x[0]).exp());
        let sol = reference_solve(&u0, &u1, &Nonlinearity::power_law(0.0, 1), 1e-3, 1.0, 50).unwrap();
        let e0 = linear_energy(&u0, &u1).unwrap();
        for (u, v) in sol.trajectory.states.iter().zip(&sol.velocities) {
            assert!((linear_energy(u, v).unwrap() - e0).abs() < 1e-8 * e0);
        }
    }
}
