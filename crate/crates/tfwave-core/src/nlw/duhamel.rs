#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::{Domain, GridFunction, GridSpec, SpectralPlan};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// Composite trapezoid rule, second order.
    #[default]
    Trapezoid,
    /// Composite Simpson rule, closed by a 3/8 panel on odd node counts and
    /// by the trapezoid rule on the first step.
    Simpson,
}

impl Quadrature {
    /// Weights `w_0..=w_i` (in units of `dt`) for `∫_0^{t_i}` on a uniform grid.
    pub fn weights(self, i: usize) -> Vec<f64> {
        let mut w = vec![0.0; i + 1];
        if i == 0 {
            return w;
        }
        match self {
            Quadrature::Trapezoid => trapezoid(&mut w),
            Quadrature::Simpson if i == 1 => trapezoid(&mut w),
            Quadrature::Simpson => {
                let simpson_end = if i % 2 == 0 { i } else { i - 3 };
                for j in (0..simpson_end).step_by(2) {
                    w[j] += 1.0 / 3.0;
                    w[j + 1] += 4.0 / 3.0;
                    w[j + 2] += 1.0 / 3.0;
                }
                if i % 2 == 1 {
                    let j = i - 3;
                    for (o, c) in [1.0, 3.0, 3.0, 1.0].iter().enumerate() {
                        w[j + o] += 3.0 / 8.0 * c;
                    }
                }
            }
        }
        w
    }
}

fn trapezoid(w: &mut [f64]) {
    let i = w.len() - 1;
    for (j, wj) in w.iter_mut().enumerate() {
        *wj = if j == 0 || j == i { 0.5 } else { 1.0 };
    }
}

/// `(BF)(t_i) = ∫_0^{t_i} K(t_i - τ) F(τ) dτ` on the uniform grid
/// `t_j = j·dt`, `j < n_t`.
///
/// Since the grid is uniform, `K(t_i - t_j)` depends on `i - j` only and
/// the lagged symbols are tabulated once.
#[derive(Debug, Clone)]
pub struct DuhamelOperator {
    spec: GridSpec,
    dt: f64,
    quadrature: Quadrature,
    plan: SpectralPlan,
    /// `lags[m][idx] = sin(2π m dt |ξ|)/(2π|ξ|)`.
    lags: Vec<Vec<f64>>,
}

impl DuhamelOperator {
    pub fn new(spec: GridSpec, dt: f64, n_t: usize, quadrature: Quadrature) -> Self {
        let radii: Vec<f64> = (0..spec.len())
            .map(|idx| 2.0 * PI * spec.radius_sq(idx, Domain::Frequency).sqrt())
            .collect();
        let lags = (0..n_t)
            .map(|m| {
                let t = m as f64 * dt;
                radii
                    .iter()
                    .map(|&w| if w == 0.0 { t } else { (w * t).sin() / w })
                    .collect()
            })
            .collect();
        Self {
            spec,
            dt,
            quadrature,
            plan: SpectralPlan::new(spec),
            lags,
        }
    }

    pub fn len(&self) -> usize {
        self.lags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags.is_empty()
    }

    fn transform_forces(&self, forces: &[GridFunction]) -> Result<Vec<Vec<Complex64>>> {
        if forces.len() != self.len() {
            return Err(Error::InvalidConfig("force history length differs from the time grid"));
        }
        forces
            .iter()
            .map(|f| {
                f.ensure_domain(Domain::Spatial)?;
                if f.spec() != self.spec {
                    return Err(Error::SpecMismatch);
                }
                let mut buf = f.values().to_vec();
                self.plan.forward_in_place(&mut buf);
                Ok(buf)
            })
            .collect()
    }

    fn at_transformed(&self, fhat: &[Vec<Complex64>], i: usize) -> Result<GridFunction> {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.spec.len()];
        for (j, w) in self.quadrature.weights(i).into_iter().enumerate() {
            if w == 0.0 || i == j {
                // K(0) = 0.
                continue;
            }
            let w = w * self.dt;
            for ((a, f), k) in acc.iter_mut().zip(&fhat[j]).zip(&self.lags[i - j]) {
                *a += f * (w * k);
            }
        }
        self.plan.inverse_in_place(&mut acc);
        GridFunction::from_values(self.spec, Domain::Spatial, acc)
    }

    /// `(BF)(t_i)` for every node.
    pub fn apply_all(&self, forces: &[GridFunction]) -> Result<Vec<GridFunction>> {
        let fhat = self.transform_forces(forces)?;
        (0..self.len()).map(|i| self.at_transformed(&fhat, i)).collect()
    }

    pub fn apply_at(&self, forces: &[GridFunction], i: usize) -> Result<GridFunction> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.len() });
        }
        let fhat = self.transform_forces(forces)?;
        self.at_transformed(&fhat, i)
    }
}

/// `∫_0^{t_i} K(t_i - τ) F(τ) dτ` for forces sampled at `t_j = j·dt`.
pub fn duhamel(forces: &[GridFunction], dt: f64, t_index: usize, quadrature: Quadrature) -> Result<GridFunction> {
    if t_index >= forces.len() {
        return Err(Error::IndexOutOfRange {
            index: t_index,
            len: forces.len(),
        });
    }
    let spec = forces[0].spec();
    DuhamelOperator::new(spec, dt, forces.len(), quadrature).apply_at(forces, t_index)
}
