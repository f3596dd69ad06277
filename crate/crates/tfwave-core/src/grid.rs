//! Uniform periodic grids, the Fourier transform, and weighted `L^p` norms.
//!
//! A [`GridSpec`] describes the box `[-l/2, l/2)^d` sampled with `n` points
//! per axis. Spatial sample `j` sits at `x_j = -l/2 + j·dx`; frequency sample
//! `m` sits at `ξ = (m - n/2)/l`, so both grids are stored in increasing
//! coordinate order and are in bijection.
//!
//! The transform discretizes `f̂(ξ) = ∫ e^{-2πixξ} f(x) dx` by the Riemann sum
//! with cell `dx^d`; its inverse uses the cell `(1/l)^d`. With these scalings
//! the discrete Parseval identity holds exactly and plane waves `e^{2πikx}`
//! map to discrete deltas of unit mass.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fft::FftNd;
use crate::{Error, Result};

/// Coordinates of a grid point; the second entry is unused when `d = 1`.
pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    d: usize,
    n: usize,
    l: f64,
}

impl GridSpec {
    pub fn new(d: usize, n: usize, l: f64) -> Result<Self> {
        if d != 1 && d != 2 {
            return Err(Error::InvalidGrid("dimension must be 1 or 2"));
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid("samples per axis must be a power of two >= 4"));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidGrid("box length must be positive and finite"));
        }
        Ok(Self { d, n, l })
    }

    /// `d = 1`, `n = 512`, `l = 32`.
    pub fn default_1d() -> Self {
        Self { d: 1, n: 512, l: 32.0 }
    }

    /// `d = 2`, `n = 128`, `l = 16`.
    pub fn default_2d() -> Self {
        Self { d: 2, n: 128, l: 16.0 }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn dx(&self) -> f64 {
        self.l / self.n as f64
    }

    pub fn dxi(&self) -> f64 {
        1.0 / self.l
    }

    /// Total number of samples, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest representable frequency magnitude per axis, `n/(2l)`.
    pub fn band(&self) -> f64 {
        self.n as f64 / (2.0 * self.l)
    }

    /// Quadrature cell volume for the given domain.
    pub fn cell(&self, domain: Domain) -> f64 {
        let h = match domain {
            Domain::Spatial => self.dx(),
            Domain::Frequency => self.dxi(),
        };
        h.powi(self.d as i32)
    }

    /// Coordinate of the `j`-th sample along one axis.
    pub fn axis_coord(&self, j: usize, domain: Domain) -> f64 {
        match domain {
            Domain::Spatial => -0.5 * self.l + j as f64 * self.dx(),
            Domain::Frequency => (j as f64 - (self.n / 2) as f64) / self.l,
        }
    }

    /// Per-axis indices of a flat (row-major) index.
    pub fn axes(&self, idx: usize) -> [usize; 2] {
        match self.d {
            1 => [idx, 0],
            _ => [idx / self.n, idx % self.n],
        }
    }

    pub fn flat(&self, axes: [usize; 2]) -> usize {
        match self.d {
            1 => axes[0],
            _ => axes[0] * self.n + axes[1],
        }
    }

    pub fn point(&self, idx: usize, domain: Domain) -> Point {
        let [a, b] = self.axes(idx);
        match self.d {
            1 => [self.axis_coord(a, domain), 0.0],
            _ => [self.axis_coord(a, domain), self.axis_coord(b, domain)],
        }
    }

    /// Squared Euclidean norm of the coordinates of sample `idx`.
    pub fn radius_sq(&self, idx: usize, domain: Domain) -> f64 {
        let [x, y] = self.point(idx, domain);
        x * x + y * y
    }

    /// Index of the sample nearest to `coord` along one axis, if `coord` is a
    /// grid node up to `tol` (in units of the grid step).
    pub fn axis_index(&self, coord: f64, domain: Domain, tol: f64) -> Option<usize> {
        let (origin, step) = match domain {
            Domain::Spatial => (-0.5 * self.l, self.dx()),
            Domain::Frequency => (-((self.n / 2) as f64) / self.l, self.dxi()),
        };
        let t = (coord - origin) / step;
        let j = t.round();
        if (t - j).abs() > tol || j < 0.0 || j >= self.n as f64 {
            return None;
        }
        Some(j as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Spatial,
    Frequency,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Spatial => "spatial",
            Domain::Frequency => "frequency",
        }
    }
}

/// Complex samples on a grid, tagged with the domain they live in.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    domain: Domain,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(spec: GridSpec, domain: Domain) -> Self {
        Self {
            spec,
            domain,
            values: vec![Complex64::new(0.0, 0.0); spec.len()],
        }
    }

    pub fn from_values(spec: GridSpec, domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidGrid("value count does not match n^d"));
        }
        Ok(Self {
            spec,
            domain,
            values,
        })
    }

    pub fn from_fn(spec: GridSpec, domain: Domain, f: impl Fn(Point) -> Complex64) -> Self {
        let values = (0..spec.len()).map(|i| f(spec.point(i, domain))).collect();
        Self {
            spec,
            domain,
            values,
        }
    }

    pub fn from_real_fn(spec: GridSpec, domain: Domain, f: impl Fn(Point) -> f64) -> Self {
        Self::from_fn(spec, domain, |x| Complex64::new(f(x), 0.0))
    }

    /// Constant function on the spatial grid.
    pub fn constant(spec: GridSpec, c: Complex64) -> Self {
        Self {
            spec,
            domain: Domain::Spatial,
            values: vec![c; spec.len()],
        }
    }

    /// `e^{2πi k·x}` for an integer wave vector `k`, i.e. frequency `k/l`.
    pub fn plane_wave(spec: GridSpec, k: [i64; 2]) -> Self {
        let xi = [k[0] as f64 / spec.l(), k[1] as f64 / spec.l()];
        Self::from_fn(spec, Domain::Spatial, |x| {
            let phase = 2.0 * core::f64::consts::PI * (xi[0] * x[0] + xi[1] * x[1]);
            Complex64::new(phase.cos(), phase.sin())
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn point(&self, idx: usize) -> Point {
        self.spec.point(idx, self.domain)
    }

    pub fn ensure_domain(&self, expected: Domain) -> Result<()> {
        if self.domain != expected {
            return Err(Error::DomainMismatch {
                expected: expected.name(),
                found: self.domain.name(),
            });
        }
        Ok(())
    }

    pub fn ensure_compatible(&self, other: &GridFunction) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        other.ensure_domain(self.domain)
    }

    /// Largest sample modulus.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    fn zip_with(&self, other: &GridFunction, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.ensure_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(*a, *b))
            .collect();
        Ok(Self {
            spec: self.spec,
            domain: self.domain,
            values,
        })
    }

    fn map(&self, op: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            spec: self.spec,
            domain: self.domain,
            values: self.values.iter().map(|v| op(*v)).collect(),
        }
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// `|u|^{2k} u`.
    pub fn abs_power(&self, k: u32) -> Self {
        self.map(|v| v * v.norm_sqr().powi(k as i32))
    }

    /// `self += c·other`.
    pub fn axpy(&mut self, c: Complex64, other: &GridFunction) -> Result<()> {
        self.ensure_compatible(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
        Ok(())
    }
}

/// The polynomial weight `⟨x⟩^s = (1 + |x|²)^{s/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weight {
    pub s: f64,
}

impl Weight {
    pub const fn new(s: f64) -> Self {
        Self { s }
    }

    pub const fn unweighted() -> Self {
        Self { s: 0.0 }
    }

    /// Weight at a point with squared norm `r2`.
    pub fn at_radius_sq(&self, r2: f64) -> f64 {
        if self.s == 0.0 {
            1.0
        } else {
            (1.0 + r2).powf(0.5 * self.s)
        }
    }

    pub fn at(&self, x: Point) -> f64 {
        self.at_radius_sq(x[0] * x[0] + x[1] * x[1])
    }
}

/// A Lebesgue exponent in the Banach range `[1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 0.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p < 1.0 {
            return Err(Error::UnsupportedExponent(p));
        }
        Ok(Self(p))
    }

    /// Exponent with the given reciprocal `1/p`.
    pub fn from_recip(r: f64) -> Result<Self> {
        if r == 0.0 {
            Ok(Self::INFINITY)
        } else {
            Self::new(1.0 / r)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn recip(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// Conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Self {
        let r = 1.0 - self.recip();
        if r == 0.0 {
            Self::INFINITY
        } else {
            Self(1.0 / r)
        }
    }
}

/// Streaming `(Σ |v|^p·cell)^{1/p}`, or `max |v|` when `p = ∞`.
#[derive(Debug, Clone, Copy)]
pub struct LpSum {
    p: Exponent,
    acc: f64,
}

impl LpSum {
    pub fn new(p: Exponent) -> Self {
        Self { p, acc: 0.0 }
    }

    /// Adds `|v|·weight` with quadrature cell `cell`; `v` is a modulus.
    #[inline]
    pub fn push(&mut self, modulus: f64, cell: f64) {
        if modulus == 0.0 {
            return;
        }
        let p = self.p.0;
        if p.is_infinite() {
            if modulus > self.acc {
                self.acc = modulus;
            }
        } else if p == 1.0 {
            self.acc += modulus * cell;
        } else if p == 2.0 {
            self.acc += modulus * modulus * cell;
        } else {
            self.acc += modulus.powf(p) * cell;
        }
    }

    pub fn finish(self) -> f64 {
        let p = self.p.0;
        if p.is_infinite() || p == 1.0 {
            self.acc
        } else if p == 2.0 {
            self.acc.sqrt()
        } else {
            self.acc.powf(1.0 / p)
        }
    }
}

/// Cached transform for one grid.
#[derive(Debug, Clone)]
pub struct SpectralPlan {
    spec: GridSpec,
    fft: FftNd,
}

impl SpectralPlan {
    pub fn new(spec: GridSpec) -> Self {
        Self {
            spec,
            fft: FftNd::new(spec.d(), spec.n()),
        }
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    /// Spatial samples in, centered frequency samples out.
    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        self.fft.forward(buf);
        self.shift(buf);
        let scale = self.spec.cell(Domain::Spatial);
        self.apply_sign(buf, scale);
    }

    /// Centered frequency samples in, spatial samples out.
    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        self.apply_sign(buf, 1.0);
        self.shift(buf);
        self.fft.inverse_unnormalized(buf);
        let scale = self.spec.cell(Domain::Frequency);
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    pub fn forward(&self, f: &GridFunction) -> Result<GridFunction> {
        f.ensure_domain(Domain::Spatial)?;
        self.check_spec(f)?;
        let mut values = f.values.clone();
        self.forward_in_place(&mut values);
        Ok(GridFunction {
            spec: self.spec,
            domain: Domain::Frequency,
            values,
        })
    }

    pub fn inverse(&self, f: &GridFunction) -> Result<GridFunction> {
        f.ensure_domain(Domain::Frequency)?;
        self.check_spec(f)?;
        let mut values = f.values.clone();
        self.inverse_in_place(&mut values);
        Ok(GridFunction {
            spec: self.spec,
            domain: Domain::Spatial,
            values,
        })
    }

    fn check_spec(&self, f: &GridFunction) -> Result<()> {
        if f.spec != self.spec {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    /// Swaps half-spaces along every axis (self-inverse for even `n`).
    fn shift(&self, buf: &mut [Complex64]) {
        let n = self.spec.n();
        match self.spec.d() {
            1 => buf.rotate_left(n / 2),
            _ => {
                buf.rotate_left(n * n / 2);
                for row in buf.chunks_exact_mut(n) {
                    row.rotate_left(n / 2);
                }
            }
        }
    }

    /// Multiplies centered sample `m` by `(-1)^{|m|}·scale`; this is the
    /// phase `e^{-2πi x_0 ξ}` of the box origin `x_0 = -l/2`.
    fn apply_sign(&self, buf: &mut [Complex64], scale: f64) {
        for (idx, v) in buf.iter_mut().enumerate() {
            let [a, b] = self.spec.axes(idx);
            let parity = match self.spec.d() {
                1 => a,
                _ => a + b,
            } % 2;
            *v *= if parity == 0 { scale } else { -scale };
        }
    }
}

/// `∂^α f` computed spectrally, `α = [α_1, α_2]`.
pub fn spectral_derivative(f: &GridFunction, alpha: [u32; 2]) -> Result<GridFunction> {
    let spec = f.spec();
    let plan = SpectralPlan::new(spec);
    let mut fhat = plan.forward(f)?;
    let two_pi = 2.0 * core::f64::consts::PI;
    for (idx, v) in fhat.values_mut().iter_mut().enumerate() {
        let xi = spec.point(idx, Domain::Frequency);
        let mut factor = Complex64::new(1.0, 0.0);
        for (axis, &order) in alpha.iter().enumerate().take(spec.d()) {
            factor *= Complex64::new(0.0, two_pi * xi[axis]).powu(order);
        }
        *v *= factor;
    }
    plan.inverse(&fhat)
}

pub fn forward_fourier(f: &GridFunction) -> Result<GridFunction> {
    SpectralPlan::new(f.spec()).forward(f)
}

pub fn inverse_fourier(f: &GridFunction) -> Result<GridFunction> {
    SpectralPlan::new(f.spec()).inverse(f)
}

/// `(Σ |⟨x⟩^s f(x)|^p cell)^{1/p}` over the grid of `f`, with the cell of its
/// domain; `p = ∞` gives the grid maximum of `|⟨x⟩^s f|`.
pub fn weighted_lp_norm(f: &GridFunction, p: Exponent, w: Weight) -> f64 {
    let spec = f.spec();
    let cell = spec.cell(f.domain());
    let mut sum = LpSum::new(p);
    for (idx, v) in f.values().iter().enumerate() {
        let weight = w.at_radius_sq(spec.radius_sq(idx, f.domain()));
        sum.push(v.norm() * weight, cell);
    }
    sum.finish()
}
