//! Parameter defaults and test functions shared by the runners.

use std::path::Path;

use serde_json::{json, Value};
use tfwave_core::grid::{Domain, Exponent, GridFunction, GridSpec};
use tfwave_core::multipliers::Symbol;
use tfwave_core::sampler::GaborSampler;
use tfwave_core::tfnorms::WindowKind;
use tfwave_core::Complex64;

use crate::config::{ExpArg, ExperimentConfig};
use crate::error::{HarnessError, HarnessResult};
use crate::io::read_grid;

pub fn exp_value(arg: Option<ExpArg>, default: f64) -> f64 {
    arg.map_or(default, |e| e.0)
}

pub fn exponent(v: f64) -> HarnessResult<Exponent> {
    Ok(Exponent::new(v)?)
}

/// Exponents as JSON: a number, or `"inf"`.
pub fn exp_json(v: f64) -> Value {
    if v.is_infinite() {
        json!("inf")
    } else {
        json!(v)
    }
}

pub fn grid_json(spec: GridSpec) -> Value {
    json!({"d": spec.d(), "n": spec.n(), "l": spec.l()})
}

pub fn sampler_json(s: &GaborSampler) -> Value {
    json!({"atoms": s.atoms, "xi_half": s.xi_half})
}

/// Decay exponent `δ` of `sin|ξ|^α/|ξ|^δ`, zero for other symbols.
pub fn symbol_delta(sym: &Symbol) -> f64 {
    match sym {
        Symbol::SinPow { delta, .. } => *delta,
        _ => 0.0,
    }
}

/// The bump profile stretched to support radius `radius`.
pub fn bump(spec: GridSpec, radius: f64) -> GridFunction {
    GridFunction::from_real_fn(spec, Domain::Spatial, |x| {
        WindowKind::Bump.profile([x[0] / radius, x[1] / radius])
    })
}

/// Named test functions; `scalable` is false for constants, whose value is
/// meant literally.
#[derive(Debug)]
pub struct Shape {
    pub f: GridFunction,
    pub scalable: bool,
}

fn named_shape(name: &str, spec: GridSpec, seed: u64) -> HarnessResult<Option<Shape>> {
    let shape = |f, scalable| Ok(Some(Shape { f, scalable }));
    match name {
        "gaussian" => shape(
            GridFunction::from_real_fn(spec, Domain::Spatial, |x| WindowKind::Gaussian.profile(x)),
            true,
        ),
        "bump" => shape(bump(spec, 1.0), true),
        "gabor" => shape(GaborSampler::new(spec).trial(seed, 0), true),
        "zero" => shape(GridFunction::zeros(spec, Domain::Spatial), false),
        _ => match name.strip_prefix("const:") {
            Some(c) => {
                let c: f64 = c
                    .parse()
                    .map_err(|_| HarnessError::Config(format!("cannot parse constant in {name:?}")))?;
                shape(GridFunction::constant(spec, Complex64::new(c, 0.0)), false)
            }
            None => Ok(None),
        },
    }
}

/// Resolves `--f`-style arguments: a named shape on the configured grid, or
/// a TFWG/JSON file whose grid must agree with any grid flags given.
pub fn load_shape(name: &str, cfg: &ExperimentConfig, n1: usize, l1: f64, seed: u64) -> HarnessResult<Shape> {
    if let Some(s) = named_shape(name, cfg.grid_with(n1, l1)?, seed)? {
        return Ok(s);
    }
    let f = read_grid(Path::new(name))?;
    let spec = f.spec();
    let clash = cfg.d.is_some_and(|d| d != spec.d())
        || cfg.n.is_some_and(|n| n != spec.n())
        || cfg.l.is_some_and(|l| l != spec.l());
    if clash {
        return Err(HarnessError::Config(format!(
            "{name}: grid d={}, n={}, l={} disagrees with the grid flags",
            spec.d(),
            spec.n(),
            spec.l()
        )));
    }
    Ok(Shape { f, scalable: false })
}

/// Like [`load_shape`] on a fixed grid.
pub fn load_shape_on(name: &str, spec: GridSpec, seed: u64) -> HarnessResult<Shape> {
    if let Some(s) = named_shape(name, spec, seed)? {
        return Ok(s);
    }
    let f = read_grid(Path::new(name))?;
    if f.spec() != spec {
        return Err(HarnessError::Config(format!("{name}: grid differs from the other data")));
    }
    Ok(Shape { f, scalable: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let spec = GridSpec::new(1, 64, 8.0).unwrap();
        let g = load_shape_on("gaussian", spec, 0).unwrap();
        assert!(g.scalable);
        assert!((g.f.values()[32].re - 1.0).abs() < 1e-15);
        let c = load_shape_on("const:0.5", spec, 0).unwrap();
        assert!(!c.scalable && c.f.values().iter().all(|v| v.re == 0.5));
        assert!(load_shape_on("const:x", spec, 0).is_err());
        let missing = load_shape_on("no/such/file.tfwg", spec, 0).unwrap_err();
        assert_eq!(missing.exit_code(), 3);
        let wide = bump(spec, 2.0);
        assert!(wide.values()[32 + 12].re > 0.0 && wide.values()[32 + 16].re == 0.0);
    }

    #[test]
    fn exponent_json() {
        assert_eq!(exp_json(f64::INFINITY), json!("inf"));
        assert_eq!(exp_json(2.0), json!(2.0));
    }
}
