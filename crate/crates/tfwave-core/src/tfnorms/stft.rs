#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::Window;
use crate::grid::{Domain, GridFunction, GridSpec, Point, SpectralPlan};
use crate::{Error, Result};

/// Sampling of the time-frequency plane.
///
/// `x_stride` and `xi_stride` are measured in grid steps, so the lattice
/// spacings are `a = x_stride·dx` and `b = xi_stride/l`. With
/// `unit_cells` the mixed-norm Riemann sums use unit cell weights instead of
/// `a^d` and `b^d` (plain sequence norms).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    pub x_stride: usize,
    pub xi_stride: usize,
    pub unit_cells: bool,
}

impl Default for Lattice {
    fn default() -> Self {
        Self::finest()
    }
}

impl Lattice {
    /// `a = dx`, `b = 1/l`.
    pub const fn finest() -> Self {
        Self {
            x_stride: 1,
            xi_stride: 1,
            unit_cells: false,
        }
    }

    pub const fn with_strides(x_stride: usize, xi_stride: usize) -> Self {
        Self {
            x_stride,
            xi_stride,
            unit_cells: false,
        }
    }

    pub const fn with_unit_cells(self) -> Self {
        Self {
            unit_cells: true,
            ..self
        }
    }

    pub fn validate(&self, spec: GridSpec) -> Result<()> {
        let n = spec.n();
        for stride in [self.x_stride, self.xi_stride] {
            if stride == 0 || !stride.is_power_of_two() || stride > n / 2 {
                return Err(Error::IncompatibleLattice(
                    "strides must be powers of two no larger than n/2",
                ));
            }
        }
        Ok(())
    }

    pub fn a(&self, spec: GridSpec) -> f64 {
        self.x_stride as f64 * spec.dx()
    }

    pub fn b(&self, spec: GridSpec) -> f64 {
        self.xi_stride as f64 * spec.dxi()
    }

    pub(crate) fn x_cell(&self, spec: GridSpec) -> f64 {
        if self.unit_cells {
            1.0
        } else {
            self.a(spec).powi(spec.d() as i32)
        }
    }

    pub(crate) fn xi_cell(&self, spec: GridSpec) -> f64 {
        if self.unit_cells {
            1.0
        } else {
            self.b(spec).powi(spec.d() as i32)
        }
    }

    /// Flat grid indices of the lattice nodes along a domain.
    pub fn nodes(&self, spec: GridSpec, domain: Domain) -> Vec<usize> {
        let stride = match domain {
            Domain::Spatial => self.x_stride,
            Domain::Frequency => self.xi_stride,
        };
        let axis: Vec<usize> = (0..spec.n()).step_by(stride).collect();
        match spec.d() {
            1 => axis,
            _ => axis
                .iter()
                .flat_map(|&a| axis.iter().map(move |&b| spec.flat([a, b])))
                .collect(),
        }
    }
}

/// `V_g f` sampled on a lattice, stored x-node major.
#[derive(Debug, Clone, PartialEq)]
pub struct StftCoefficients {
    spec: GridSpec,
    lattice: Lattice,
    x_nodes: Vec<usize>,
    xi_nodes: Vec<usize>,
    coeffs: Vec<Complex64>,
}

impl StftCoefficients {
    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn x_count(&self) -> usize {
        self.x_nodes.len()
    }

    pub fn xi_count(&self) -> usize {
        self.xi_nodes.len()
    }

    pub fn x_point(&self, ix: usize) -> Point {
        self.spec.point(self.x_nodes[ix], Domain::Spatial)
    }

    pub fn xi_point(&self, ixi: usize) -> Point {
        self.spec.point(self.xi_nodes[ixi], Domain::Frequency)
    }

    pub fn get(&self, ix: usize, ixi: usize) -> Complex64 {
        self.coeffs[ix * self.xi_nodes.len() + ixi]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Per-axis lattice position of an x-node.
    pub fn x_axes(&self, ix: usize) -> [usize; 2] {
        let [a, b] = self.spec.axes(self.x_nodes[ix]);
        [a / self.lattice.x_stride, b / self.lattice.x_stride]
    }

    /// Per-axis lattice position of a ξ-node.
    pub fn xi_axes(&self, ixi: usize) -> [usize; 2] {
        let [a, b] = self.spec.axes(self.xi_nodes[ixi]);
        [a / self.lattice.xi_stride, b / self.lattice.xi_stride]
    }
}

pub(crate) fn check_window(f: &GridFunction, g: &Window) -> Result<()> {
    f.ensure_domain(Domain::Spatial)?;
    if g.spec() != f.spec() {
        return Err(Error::SpecMismatch);
    }
    Ok(())
}

/// Calls `visit(x_node_flat_index, spectrum)` for every lattice x-node, where
/// `spectrum` is the centered transform of `f·conj(T_x g)` on the full grid.
pub(crate) fn for_each_stft_row(
    f: &GridFunction,
    g: &Window,
    lat: &Lattice,
    conjugate_window: bool,
    mut visit: impl FnMut(usize, &[Complex64]),
) -> Result<()> {
    check_window(f, g)?;
    let spec = f.spec();
    lat.validate(spec)?;
    let plan = SpectralPlan::new(spec);
    let mut buf = vec![Complex64::new(0.0, 0.0); spec.len()];
    for node in lat.nodes(spec, Domain::Spatial) {
        g.translated_into(spec.axes(node), &mut buf);
        let mut any = false;
        for (b, v) in buf.iter_mut().zip(f.values()) {
            let w = if conjugate_window { b.conj() } else { *b };
            *b = v * w;
            any |= *b != Complex64::new(0.0, 0.0);
        }
        if any {
            plan.forward_in_place(&mut buf);
        }
        visit(node, &buf);
    }
    Ok(())
}

/// `V_g f(x, ξ) = ∫ f(y) conj(g(y - x)) e^{-2πiyξ} dy` on the lattice.
pub fn stft(f: &GridFunction, g: &Window, lat: &Lattice) -> Result<StftCoefficients> {
    let spec = f.spec();
    lat.validate(spec)?;
    let x_nodes = lat.nodes(spec, Domain::Spatial);
    let xi_nodes = lat.nodes(spec, Domain::Frequency);
    let mut coeffs = Vec::with_capacity(x_nodes.len() * xi_nodes.len());
    for_each_stft_row(f, g, lat, true, |_, row| {
        coeffs.extend(xi_nodes.iter().map(|&k| row[k]));
    })?;
    Ok(StftCoefficients {
        spec,
        lattice: *lat,
        x_nodes,
        xi_nodes,
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn lattice_validation() {
        let spec = GridSpec::new(1, 64, 8.0).unwrap();
        assert!(Lattice::finest().validate(spec).is_ok());
        assert!(Lattice::with_strides(3, 1).validate(spec).is_err());
        assert!(Lattice::with_strides(0, 1).validate(spec).is_err());
        assert!(Lattice::with_strides(64, 1).validate(spec).is_err());
        assert_eq!(Lattice::with_strides(4, 2).nodes(spec, Domain::Spatial).len(), 16);
    }

    #[test]
    fn stft_of_zero_vanishes() {
        let spec = GridSpec::new(1, 64, 8.0).unwrap();
        let f = GridFunction::zeros(spec, Domain::Spatial);
        let v = stft(&f, &Window::gaussian(spec), &Lattice::finest()).unwrap();
        assert!(v.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn gaussian_stft_closed_form() {
        let spec = GridSpec::new(1, 256, 16.0).unwrap();
        let g = Window::gaussian(spec);
        let v = stft(g.g(), &g, &Lattice::finest()).unwrap();
        let mut worst: f64 = 0.0;
        for ix in 0..v.x_count() {
            for ixi in 0..v.xi_count() {
                let x = v.x_point(ix)[0];
                let xi = v.xi_point(ixi)[0];
                let expect = 2f64.powf(-0.5) * (-PI * (x * x + xi * xi) / 2.0).exp();
                worst = worst.max((v.get(ix, ixi).norm() - expect).abs());
            }
        }
        assert!(worst < 1e-8, "worst {worst}");
    }

    #[test]
    fn rejects_mismatched_window() {
        let spec = GridSpec::new(1, 64, 8.0).unwrap();
        let other = GridSpec::new(1, 128, 8.0).unwrap();
        let f = GridFunction::zeros(spec, Domain::Spatial);
        assert_eq!(
            stft(&f, &Window::gaussian(other), &Lattice::finest()),
            Err(Error::SpecMismatch)
        );
    }
}
