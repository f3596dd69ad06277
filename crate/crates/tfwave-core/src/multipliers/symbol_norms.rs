#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec::Vec;

use rand::Rng;

use super::{split_symbol, Cutoff, Symbol};
use crate::grid::{inverse_fourier, Domain, Exponent, GridFunction, GridSpec, Point, Weight};
use crate::tfnorms::{amalgam_norm, fl_norm, modulation_norm, AmalgamSpec, Lattice, ModulationSpec, Window};
use crate::{Error, Result};

/// Grid on which `σ·T_x g` is transformed, and the spacing of the
/// translates `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalGrid {
    pub box_len: f64,
    pub n: usize,
    pub step: f64,
}

impl LocalGrid {
    /// Box 8 with 512 points in one dimension, box 4 with 64 points per
    /// axis in two; translates a quarter of the window radius apart.
    pub fn default_for(d: usize) -> Self {
        match d {
            1 => Self {
                box_len: 8.0,
                n: 512,
                step: 0.25,
            },
            _ => Self {
                box_len: 4.0,
                n: 64,
                step: 0.25,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolNorm {
    pub value: f64,
    /// `(x, ‖σ T_x g‖_{FL^p} ⟨x⟩^γ)` for every translate.
    pub profile: Vec<(Point, f64)>,
}

/// `sup_{|x_i| ≤ ξ_max} ‖σ T_x g‖_{FL^p} ⟨x⟩^γ`, the `W(FL^p, L^∞_γ)`
/// norm of a symbol truncated to translates in a cube.
///
/// `g` is the bump window rescaled so that `‖g‖_{FL^1} = 1`, which gives
/// the constant symbol `1` norm one.
pub fn symbol_amalgam_norm(
    sym: &Symbol,
    p: Exponent,
    gamma: f64,
    xi_max: f64,
    d: usize,
    local: LocalGrid,
) -> Result<SymbolNorm> {
    sym.validate()?;
    if !(xi_max >= 0.0 && local.step > 0.0) {
        return Err(Error::InvalidConfig("symbol norm needs xi_max >= 0 and a positive step"));
    }
    let spec = GridSpec::new(d, local.n, local.box_len)?;
    let bump = Window::bump(spec);
    let mass = fl_norm(bump.g(), Exponent::ONE, 0.0)?;
    let g: Vec<f64> = bump.g().values().iter().map(|v| v.re / mass).collect();
    let support: Vec<usize> = (0..spec.len()).filter(|&i| g[i] != 0.0).collect();
    let steps = (xi_max / local.step + 1e-9).floor() as i64;
    let offsets: Vec<f64> = (-steps..=steps).map(|k| k as f64 * local.step).collect();
    let translates: Vec<Point> = match d {
        1 => offsets.iter().map(|&a| [a, 0.0]).collect(),
        _ => offsets.iter().flat_map(|&a| offsets.iter().map(move |&b| [a, b])).collect(),
    };
    let weight = Weight::new(gamma);
    let mut local_fn = GridFunction::zeros(spec, Domain::Spatial);
    let mut profile = Vec::with_capacity(translates.len());
    let mut value: f64 = 0.0;
    for x in translates {
        for &i in &support {
            let y = spec.point(i, Domain::Spatial);
            local_fn.values_mut()[i] = sym.eval([x[0] + y[0], x[1] + y[1]])? * g[i];
        }
        let v = fl_norm(&local_fn, p, 0.0)? * weight.at(x);
        value = value.max(v);
        profile.push((x, v));
    }
    Ok(SymbolNorm { value, profile })
}

/// `‖F^{-1}σ‖_{W(FL^∞_1, L^1_γ)}` computed on `spec` with the bump window.
pub fn inverse_symbol_amalgam_norm(sym: &Symbol, spec: GridSpec, gamma: f64) -> Result<f64> {
    let kernel = inverse_fourier(&sym.sample_on(spec)?)?;
    let a = AmalgamSpec {
        q: Exponent::INFINITY,
        s: 1.0,
        p: Exponent::ONE,
        gamma,
    };
    amalgam_norm(&kernel, &Window::bump(spec), &a)
}

/// `‖cos|x|‖_{M^{∞,1}}` on the periodic box of side `2πm` (where `cos x`
/// is exactly periodic), `d = 1`, with the unit-`L²` Gaussian window.
///
/// The box truncates the `x`-supremum to one period's worth of translates
/// per unit `m`; since `|V_g cos|` is almost periodic in `x` the value
/// settles once `m` covers a few periods.
pub fn cos_modulation_diagnostic(m: usize, n: usize) -> Result<f64> {
    let spec = GridSpec::new(1, n, 2.0 * core::f64::consts::PI * m as f64)?;
    let f = GridFunction::from_real_fn(spec, Domain::Spatial, |x| x[0].abs().cos());
    let g = Window::gaussian(spec).normalized();
    let ms = ModulationSpec {
        p: Exponent::INFINITY,
        q: Exponent::ONE,
        s: 0.0,
    };
    modulation_norm(&f, &g, &ms, &Lattice::finest())
}

/// `⟨ξ⟩^{-δ} ⟨x - ξ⟩^{-|δ|} / ⟨x⟩^{-δ}`.
pub fn weight_inequality_ratio(x: Point, xi: Point, delta: f64) -> f64 {
    let bracket = |p: Point| (1.0 + p[0] * p[0] + p[1] * p[1]).sqrt();
    bracket(xi).powf(-delta) * bracket([x[0] - xi[0], x[1] - xi[1]]).powf(-delta.abs()) / bracket(x).powf(-delta)
}

/// `⟨ξ⟩^{-δ} ⟨x - ξ⟩^{-|δ|} ≤ 2^{|δ|/2} ⟨x⟩^{-δ}`.
///
/// Without the factor `2^{|δ|/2}` the bound fails for small arguments,
/// e.g. `x = 1`, `ξ = 1/2`, `δ = 1`; the factor comes from
/// `1 + |a + b|² ≤ 2(1 + |a|²)(1 + |b|²)`.
pub fn weight_inequality_holds(x: Point, xi: Point, delta: f64) -> bool {
    weight_inequality_ratio(x, xi, delta) <= 2f64.powf(0.5 * delta.abs())
}

/// Number of failures among `count` random `(x, ξ, δ)` with coordinates
/// uniform in `[-range, range]^d` and `δ` uniform in `[0, 1]`.
pub fn weight_inequality_violations(rng: &mut impl Rng, count: usize, d: usize, range: f64) -> usize {
    let point = |rng: &mut _| {
        let mut p = [0.0; 2];
        for c in p.iter_mut().take(d) {
            *c = Rng::random_range(rng, -range..=range);
        }
        p
    };
    (0..count)
        .filter(|_| {
            let x = point(rng);
            let xi = point(rng);
            let delta = rng.random_range(0.0..=1.0);
            !weight_inequality_holds(x, xi, delta)
        })
        .count()
}

/// Weighted derivative bounds `max_ξ |∂^k σ_osc(ξ)| ⟨ξ⟩^δ` for `k = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscDecay {
    pub orders: [f64; 3],
}

impl OscDecay {
    pub fn max(&self) -> f64 {
        self.orders.iter().copied().fold(0.0, f64::max)
    }
}

/// Central finite differences (step `h`) of the oscillatory part of a
/// radial symbol along the positive axis, sampled every `spacing` up to
/// `xi_max`, each weighted by `⟨ξ⟩^δ`. `δ` is the decay exponent of
/// `SinPow` symbols and zero otherwise.
pub fn osc_derivative_decay(sym: &Symbol, cutoff: Cutoff, xi_max: f64, spacing: f64, h: f64) -> Result<OscDecay> {
    sym.validate()?;
    if !(spacing > 0.0 && h > 0.0) {
        return Err(Error::InvalidConfig("osc decay needs positive spacing and step"));
    }
    let delta = match sym {
        Symbol::SinPow { delta, .. } => *delta,
        _ => 0.0,
    };
    let (_, osc) = split_symbol(sym, cutoff);
    let eval = |r: f64| -> Result<f64> { Ok(osc.eval([r, 0.0])?.re) };
    let weight = Weight::new(delta);
    let mut orders = [0.0f64; 3];
    let count = (xi_max / spacing).floor() as usize;
    for i in 0..=count {
        let r = i as f64 * spacing;
        let (lo, mid, hi) = (eval(r - h)?, eval(r)?, eval(r + h)?);
        let w = weight.at([r, 0.0]);
        let values = [mid, (hi - lo) / (2.0 * h), (hi - 2.0 * mid + lo) / (h * h)];
        for (o, v) in orders.iter_mut().zip(values) {
            *o = o.max(v.abs() * w);
        }
    }
    Ok(OscDecay { orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::trial_rng;

    #[test]
    fn zero_and_one() {
        let local = LocalGrid::default_for(1);
        let z = symbol_amalgam_norm(&Symbol::constant(0.0), Exponent::ONE, 1.0, 4.0, 1, local).unwrap();
        assert_eq!(z.value, 0.0);
        let one = symbol_amalgam_norm(&Symbol::constant(1.0), Exponent::ONE, 0.0, 4.0, 1, local).unwrap();
        assert!((one.value - 1.0).abs() < 1e-12);
        assert_eq!(one.profile.len(), 33);
    }

    #[test]
    fn fl_infinity_norm_is_window_mass() {
        // ‖T_x g‖_{FL^∞} = ∫ g, independent of x.
        let local = LocalGrid::default_for(1);
        let v = symbol_amalgam_norm(&Symbol::constant(1.0), Exponent::INFINITY, 0.0, 2.0, 1, local).unwrap();
        let spec = GridSpec::new(1, local.n, local.box_len).unwrap();
        let bump = Window::bump(spec);
        let mass = fl_norm(bump.g(), Exponent::ONE, 0.0).unwrap();
        let integral: f64 = bump.g().values().iter().map(|c| c.re).sum::<f64>() * spec.dx();
        assert!((v.value - integral / mass).abs() < 1e-12);
    }

    #[test]
    fn weight_inequality_random_sample() {
        let mut rng = trial_rng(11, 0);
        assert_eq!(weight_inequality_violations(&mut rng, 10_000, 1, 50.0), 0);
        assert_eq!(weight_inequality_violations(&mut rng, 10_000, 2, 50.0), 0);
        assert!(weight_inequality_holds([3.0, 0.0], [0.0, 0.0], 0.7));
        assert!(weight_inequality_ratio([1.0, 0.0], [0.5, 0.0], 1.0) > 1.0);
    }

    #[test]
    fn osc_decay_is_bounded() {
        let sym = Symbol::SinPow { alpha: 1.0, delta: 1.0 };
        let a = osc_derivative_decay(&sym, Cutoff::standard(), 32.0, 0.05, 1e-4).unwrap();
        let b = osc_derivative_decay(&sym, Cutoff::standard(), 128.0, 0.05, 1e-4).unwrap();
        assert!(a.max().is_finite());
        assert!(b.max() <= 1.25 * a.max());
    }

    #[test]
    fn cos_diagnostic_settles() {
        let a = cos_modulation_diagnostic(4, 256).unwrap();
        let b = cos_modulation_diagnostic(8, 512).unwrap();
        assert!(a.is_finite() && a > 0.0);
        assert!((a - b).abs() < 0.05 * a, "{a} vs {b}");
    }
}
