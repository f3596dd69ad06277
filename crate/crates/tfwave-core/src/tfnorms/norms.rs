use alloc::vec::Vec;

use super::stft::for_each_stft_row;
use super::{Lattice, Window};
use crate::grid::{
    forward_fourier, weighted_lp_norm, Domain, Exponent, GridFunction, GridSpec, LpSum, Weight,
};
use crate::{Error, Result};

/// Exponents and weight of `M^{p,q}_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationSpec {
    pub p: Exponent,
    pub q: Exponent,
    pub s: f64,
}

impl ModulationSpec {
    pub fn new(p: f64, q: f64, s: f64) -> Result<Self> {
        Ok(Self {
            p: Exponent::new(p)?,
            q: Exponent::new(q)?,
            s,
        })
    }
}

/// Exponents and weights of `W(FL^q_s, L^p_γ)`: local `(q, s)`, global `(p, γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmalgamSpec {
    pub q: Exponent,
    pub s: f64,
    pub p: Exponent,
    pub gamma: f64,
}

impl AmalgamSpec {
    pub fn new(q: f64, s: f64, p: f64, gamma: f64) -> Result<Self> {
        Ok(Self {
            q: Exponent::new(q)?,
            s,
            p: Exponent::new(p)?,
            gamma,
        })
    }
}

/// Either kind of mixed norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    Modulation(ModulationSpec),
    Amalgam(AmalgamSpec),
}

impl NormSpec {
    /// Local (frequency) smoothness weight `s`.
    pub fn s(&self) -> f64 {
        match self {
            NormSpec::Modulation(m) => m.s,
            NormSpec::Amalgam(a) => a.s,
        }
    }

    /// Same spec with `s` replaced by `s + ds`.
    pub fn shifted(&self, ds: f64) -> Self {
        match *self {
            NormSpec::Modulation(m) => NormSpec::Modulation(ModulationSpec { s: m.s + ds, ..m }),
            NormSpec::Amalgam(a) => NormSpec::Amalgam(AmalgamSpec { s: a.s + ds, ..a }),
        }
    }

    pub fn same_kind(&self, other: &NormSpec) -> bool {
        matches!(
            (self, other),
            (NormSpec::Modulation(_), NormSpec::Modulation(_)) | (NormSpec::Amalgam(_), NormSpec::Amalgam(_))
        )
    }
}

/// Windows and lattice used to evaluate [`NormSpec`]s on one grid.
///
/// Modulation norms use the unit-`L²` Gaussian, amalgam norms the bump.
#[derive(Debug, Clone)]
pub struct NormContext {
    pub gaussian: Window,
    pub bump: Window,
    pub lattice: Lattice,
}

impl NormContext {
    pub fn new(spec: GridSpec) -> Self {
        Self {
            gaussian: Window::gaussian(spec).normalized(),
            bump: Window::bump(spec),
            lattice: Lattice::finest(),
        }
    }

    pub fn with_lattice(mut self, lattice: Lattice) -> Self {
        self.lattice = lattice;
        self
    }

    pub fn spec(&self) -> GridSpec {
        self.gaussian.spec()
    }

    pub fn norm(&self, f: &GridFunction, spec: &NormSpec) -> Result<f64> {
        match spec {
            NormSpec::Modulation(m) => modulation_norm(f, &self.gaussian, m, &self.lattice),
            NormSpec::Amalgam(a) => amalgam_norm_strided(f, &self.bump, a, self.lattice.x_stride),
        }
    }
}

/// `(∫ (∫ |V_g f(x,ξ)|^p dx)^{q/p} ⟨ξ⟩^{sq} dξ)^{1/q}` as a lattice Riemann sum.
pub fn modulation_norm(f: &GridFunction, g: &Window, spec: &ModulationSpec, lat: &Lattice) -> Result<f64> {
    let grid = f.spec();
    lat.validate(grid)?;
    let xi_nodes = lat.nodes(grid, Domain::Frequency);
    let x_cell = lat.x_cell(grid);
    let mut inner: Vec<LpSum> = xi_nodes.iter().map(|_| LpSum::new(spec.p)).collect();
    for_each_stft_row(f, g, lat, true, |_, row| {
        for (acc, &k) in inner.iter_mut().zip(&xi_nodes) {
            acc.push(row[k].norm(), x_cell);
        }
    })?;
    let weight = Weight::new(spec.s);
    let xi_cell = lat.xi_cell(grid);
    let mut outer = LpSum::new(spec.q);
    for (acc, &k) in inner.into_iter().zip(&xi_nodes) {
        let w = weight.at_radius_sq(grid.radius_sq(k, Domain::Frequency));
        outer.push(acc.finish() * w, xi_cell);
    }
    Ok(outer.finish())
}

/// `‖f‖_{W(FL^q_s, L^p_γ)}` with every grid point as a translation node.
pub fn amalgam_norm(f: &GridFunction, g: &Window, spec: &AmalgamSpec) -> Result<f64> {
    amalgam_norm_strided(f, g, spec, 1)
}

/// `(∫ ‖F(f T_x g)‖_{L^q_s}^p ⟨x⟩^{γp} dx)^{1/p}`, translating the window
/// over every `x_stride`-th grid node.
pub fn amalgam_norm_strided(f: &GridFunction, g: &Window, spec: &AmalgamSpec, x_stride: usize) -> Result<f64> {
    if g.kind().radius().is_none() {
        return Err(Error::WindowNotCompactlySupported);
    }
    let grid = f.spec();
    let lat = Lattice::with_strides(x_stride, 1);
    let local_weight = Weight::new(spec.s);
    let global_weight = Weight::new(spec.gamma);
    let xi_cell = grid.cell(Domain::Frequency);
    let x_cell = lat.x_cell(grid);
    let mut global = LpSum::new(spec.p);
    for_each_stft_row(f, g, &lat, false, |node, row| {
        let mut local = LpSum::new(spec.q);
        for (k, v) in row.iter().enumerate() {
            let m = v.norm();
            if m != 0.0 {
                local.push(m * local_weight.at_radius_sq(grid.radius_sq(k, Domain::Frequency)), xi_cell);
            }
        }
        let w = global_weight.at_radius_sq(grid.radius_sq(node, Domain::Spatial));
        global.push(local.finish() * w, x_cell);
    })?;
    Ok(global.finish())
}

/// `‖⟨·⟩^s f̂‖_{L^q}`.
pub fn fl_norm(f: &GridFunction, q: Exponent, s: f64) -> Result<f64> {
    let fhat = forward_fourier(f)?;
    Ok(weighted_lp_norm(&fhat, q, Weight::new(s)))
}
