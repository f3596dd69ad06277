//! Fourier multipliers `H_σ f = F^{-1}(σ f̂)`.
//!
//! Closed-form symbols are evaluated exactly at any frequency, with
//! removable singularities at `ξ = 0` replaced by their limits.

mod operator;
mod symbol_norms;

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::{Domain, GridFunction, GridSpec, Point, SpectralPlan};
use crate::{Error, Result};

pub use operator::{estimate_operator_norm, OperatorNormReport, OperatorProblem, OperatorTrial, RefineConfig};
pub use symbol_norms::{
    cos_modulation_diagnostic, inverse_symbol_amalgam_norm, osc_derivative_decay, symbol_amalgam_norm,
    weight_inequality_holds, weight_inequality_ratio, weight_inequality_violations, LocalGrid, OscDecay, SymbolNorm,
};

/// Smooth radial cutoff: `1` on `|ξ| ≤ inner`, `0` on `|ξ| ≥ outer`,
/// monotone in between.
///
/// The transition is `η((|ξ| - inner)/(outer - inner))` with
/// `η(u) = h(1-u)/(h(1-u) + h(u))` and `h(t) = e^{-1/t}` for `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub inner: f64,
    pub outer: f64,
}

impl Default for Cutoff {
    fn default() -> Self {
        Self::standard()
    }
}

impl Cutoff {
    /// Transition on `1 ≤ |ξ| ≤ 2`.
    pub const fn standard() -> Self {
        Self { inner: 1.0, outer: 2.0 }
    }

    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner && outer.is_finite()) {
            return Err(Error::InvalidConfig("cutoff needs 0 < inner < outer"));
        }
        Ok(Self { inner, outer })
    }

    pub fn value(&self, r: f64) -> f64 {
        if r <= self.inner {
            return 1.0;
        }
        if r >= self.outer {
            return 0.0;
        }
        let u = (r - self.inner) / (self.outer - self.inner);
        let h = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
        let (a, b) = (h(1.0 - u), h(u));
        a / (a + b)
    }
}

/// Which side of a cutoff split a symbol keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolPart {
    /// `χσ`, supported near the origin.
    Singular,
    /// `(1 - χ)σ`, vanishing near the origin.
    Oscillatory,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CustomSymbol {
    Constant(Complex64),
    /// Values on the frequency grid of a spec; only evaluable at its nodes.
    Sampled(GridFunction),
    Split {
        base: Box<Symbol>,
        cutoff: Cutoff,
        part: SymbolPart,
    },
    Product(Vec<Symbol>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    /// `sin(|ξ|^α)/|ξ|^δ` with `δ ≤ α ≤ 1`, `α > 0`.
    SinPow { alpha: f64, delta: f64 },
    /// `cos|ξ|`.
    Cos,
    /// `cos(2πt|ξ|)`.
    WaveCos { t: f64 },
    /// `sin(2πt|ξ|)/(2π|ξ|)`, equal to `t` at the origin.
    WaveSinc { t: f64 },
    Custom(CustomSymbol),
}

impl Symbol {
    pub fn sin_pow(alpha: f64, delta: f64) -> Result<Self> {
        let s = Symbol::SinPow { alpha, delta };
        s.validate()?;
        Ok(s)
    }

    pub fn constant(c: f64) -> Self {
        Symbol::Custom(CustomSymbol::Constant(Complex64::new(c, 0.0)))
    }

    pub fn sampled(values: GridFunction) -> Result<Self> {
        values.ensure_domain(Domain::Frequency)?;
        Ok(Symbol::Custom(CustomSymbol::Sampled(values)))
    }

    pub fn product(factors: Vec<Symbol>) -> Self {
        Symbol::Custom(CustomSymbol::Product(factors))
    }

    /// `self` restricted smoothly to `|ξ| ≤ 2·radius`.
    pub fn tapered(self, radius: f64) -> Result<Self> {
        let cutoff = Cutoff::new(radius, 2.0 * radius)?;
        let (window, _) = split_symbol(&Symbol::constant(1.0), cutoff);
        Ok(Symbol::product(alloc::vec![self, window]))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Symbol::SinPow { alpha, delta } => {
                let ok = alpha.is_finite() && delta.is_finite() && *alpha > 0.0 && *alpha <= 1.0 && delta <= alpha;
                if ok {
                    Ok(())
                } else {
                    Err(Error::InvalidSymbolParams {
                        alpha: *alpha,
                        delta: *delta,
                    })
                }
            }
            Symbol::Custom(CustomSymbol::Split { base, .. }) => base.validate(),
            Symbol::Custom(CustomSymbol::Product(fs)) => fs.iter().try_for_each(Symbol::validate),
            _ => Ok(()),
        }
    }

    /// `σ(ξ)`; the second coordinate is ignored for one-dimensional
    /// sampled symbols.
    pub fn eval(&self, xi: Point) -> Result<Complex64> {
        let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
        let real = |v: f64| Ok(Complex64::new(v, 0.0));
        match self {
            Symbol::SinPow { alpha, delta } => {
                self.validate()?;
                if r == 0.0 {
                    return real(if delta == alpha { 1.0 } else { 0.0 });
                }
                real(r.powf(*alpha).sin() / r.powf(*delta))
            }
            Symbol::Cos => real(r.cos()),
            Symbol::WaveCos { t } => real((2.0 * PI * t * r).cos()),
            Symbol::WaveSinc { t } => {
                if r == 0.0 {
                    real(*t)
                } else {
                    real((2.0 * PI * t * r).sin() / (2.0 * PI * r))
                }
            }
            Symbol::Custom(c) => match c {
                CustomSymbol::Constant(v) => Ok(*v),
                CustomSymbol::Sampled(g) => {
                    let spec = g.spec();
                    let tol = 1e-9;
                    let i = spec.axis_index(xi[0], Domain::Frequency, tol).ok_or(Error::SymbolOffGrid)?;
                    let j = match spec.d() {
                        1 => 0,
                        _ => spec.axis_index(xi[1], Domain::Frequency, tol).ok_or(Error::SymbolOffGrid)?,
                    };
                    Ok(g.values()[spec.flat([i, j])])
                }
                CustomSymbol::Split { base, cutoff, part } => {
                    let chi = cutoff.value(r);
                    let w = match part {
                        SymbolPart::Singular => chi,
                        SymbolPart::Oscillatory => 1.0 - chi,
                    };
                    if w == 0.0 {
                        // Avoid evaluating the base where the part vanishes.
                        base.validate()?;
                        return real(0.0);
                    }
                    Ok(base.eval(xi)? * w)
                }
                CustomSymbol::Product(fs) => fs.iter().try_fold(Complex64::new(1.0, 0.0), |acc, f| Ok(acc * f.eval(xi)?)),
            },
        }
    }

    /// Samples on the frequency grid of `spec`.
    pub fn sample_on(&self, spec: GridSpec) -> Result<GridFunction> {
        if let Symbol::Custom(CustomSymbol::Sampled(g)) = self {
            if g.spec() == spec {
                return Ok(g.clone());
            }
        }
        self.validate()?;
        let values = (0..spec.len())
            .map(|idx| self.eval(spec.point(idx, Domain::Frequency)))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::from_values(spec, Domain::Frequency, values)
    }
}

/// `H_σ f` via FFT.
pub fn apply_multiplier(sym: &Symbol, f: &GridFunction) -> Result<GridFunction> {
    f.ensure_domain(Domain::Spatial)?;
    let sampled = sym.sample_on(f.spec())?;
    apply_sampled(&SpectralPlan::new(f.spec()), &sampled, f)
}

/// `H_σ f` for a symbol already sampled on the frequency grid of `f`.
pub fn apply_sampled(plan: &SpectralPlan, symbol: &GridFunction, f: &GridFunction) -> Result<GridFunction> {
    f.ensure_domain(Domain::Spatial)?;
    symbol.ensure_domain(Domain::Frequency)?;
    if symbol.spec() != f.spec() || plan.spec() != f.spec() {
        return Err(Error::SpecMismatch);
    }
    let mut buf = f.values().to_vec();
    plan.forward_in_place(&mut buf);
    for (v, s) in buf.iter_mut().zip(symbol.values()) {
        *v *= s;
    }
    plan.inverse_in_place(&mut buf);
    GridFunction::from_values(f.spec(), Domain::Spatial, buf)
}

/// `σ = χσ + (1 - χ)σ`, returned as `(σ_sing, σ_osc)`.
pub fn split_symbol(sym: &Symbol, cutoff: Cutoff) -> (Symbol, Symbol) {
    let part = |part| {
        Symbol::Custom(CustomSymbol::Split {
            base: Box::new(sym.clone()),
            cutoff,
            part,
        })
    };
    (part(SymbolPart::Singular), part(SymbolPart::Oscillatory))
}
