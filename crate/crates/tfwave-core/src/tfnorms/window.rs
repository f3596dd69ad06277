#[allow(unused_imports)]
use num_traits::Float as _;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::{weighted_lp_norm, Domain, Exponent, GridFunction, GridSpec, Point, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// `e^{-π|x|²}`.
    Gaussian,
    /// `exp(1 - 1/(1 - |x|²))` on `|x| < 1`, zero outside.
    Bump,
}

impl WindowKind {
    /// Unscaled profile value at `x`.
    pub fn profile(self, x: Point) -> f64 {
        let r2 = x[0] * x[0] + x[1] * x[1];
        match self {
            WindowKind::Gaussian => (-PI * r2).exp(),
            WindowKind::Bump => {
                if r2 < 1.0 {
                    (1.0 - 1.0 / (1.0 - r2)).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// Support radius, if compactly supported.
    pub fn radius(self) -> Option<f64> {
        match self {
            WindowKind::Gaussian => None,
            WindowKind::Bump => Some(1.0),
        }
    }
}

/// A window function sampled on a grid and centered at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    kind: WindowKind,
    scale: f64,
    g: GridFunction,
    l2_norm: f64,
}

impl Window {
    pub fn new(kind: WindowKind, spec: GridSpec) -> Self {
        Self::with_scale(kind, spec, 1.0)
    }

    pub fn gaussian(spec: GridSpec) -> Self {
        Self::new(WindowKind::Gaussian, spec)
    }

    pub fn bump(spec: GridSpec) -> Self {
        Self::new(WindowKind::Bump, spec)
    }

    fn with_scale(kind: WindowKind, spec: GridSpec, scale: f64) -> Self {
        let g = GridFunction::from_real_fn(spec, Domain::Spatial, |x| scale * kind.profile(x));
        let l2_norm = weighted_lp_norm(&g, Exponent::TWO, Weight::unweighted());
        debug_assert!(l2_norm > 0.0, "window vanishes on the grid");
        Self {
            kind,
            scale,
            g,
            l2_norm,
        }
    }

    /// Rescaled to unit discrete `L²` norm.
    pub fn normalized(self) -> Self {
        let scale = self.scale / self.l2_norm;
        Self::with_scale(self.kind, self.g.spec(), scale)
    }

    /// Same kind and scale, sampled on another grid.
    pub fn resampled(&self, spec: GridSpec) -> Self {
        Self::with_scale(self.kind, spec, self.scale)
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn g(&self) -> &GridFunction {
        &self.g
    }

    pub fn spec(&self) -> GridSpec {
        self.g.spec()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm
    }

    pub fn eval(&self, x: Point) -> f64 {
        self.scale * self.kind.profile(x)
    }

    /// Writes `T_x g` into `out`, where `x` is the grid node with per-axis
    /// indices `node`. The translation is periodic on the box.
    pub(crate) fn translated_into(&self, node: [usize; 2], out: &mut [Complex64]) {
        let spec = self.g.spec();
        let n = spec.n();
        let half = n / 2;
        let g = self.g.values();
        match spec.d() {
            1 => {
                // T_x g[j] = g[j - node + n/2]
                let offset = (n + half - node[0]) % n;
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot = g[(j + offset) % n];
                }
            }
            _ => {
                let off0 = (n + half - node[0]) % n;
                let off1 = (n + half - node[1]) % n;
                for r in 0..n {
                    let src_row = (r + off0) % n;
                    for c in 0..n {
                        out[r * n + c] = g[src_row * n + (c + off1) % n];
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles() {
        assert_eq!(WindowKind::Gaussian.profile([0.0, 0.0]), 1.0);
        assert_eq!(WindowKind::Bump.profile([0.0, 0.0]), 1.0);
        assert_eq!(WindowKind::Bump.profile([1.0, 0.0]), 0.0);
        assert_eq!(WindowKind::Bump.profile([0.8, 0.7]), 0.0);
        assert!(WindowKind::Bump.profile([0.99, 0.0]) > 0.0);
    }

    #[test]
    fn normalization() {
        let spec = GridSpec::new(1, 256, 16.0).unwrap();
        let w = Window::gaussian(spec);
        assert!((w.l2_norm() - 2f64.powf(-0.25)).abs() < 1e-12);
        let w = w.normalized();
        assert!((w.l2_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn translation_moves_the_center() {
        let spec = GridSpec::new(2, 16, 8.0).unwrap();
        let w = Window::gaussian(spec);
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); spec.len()];
        w.translated_into([10, 3], &mut out);
        for (idx, v) in out.iter().enumerate() {
            let [a, b] = spec.axes(idx);
            let x = spec.point(idx, Domain::Spatial);
            let c = spec.point(spec.flat([10, 3]), Domain::Spatial);
            // periodic distance
            let wrap = |t: f64| t - spec.l() * (t / spec.l()).round();
            let expect = w.eval([wrap(x[0] - c[0]), wrap(x[1] - c[1])]);
            assert!((v.re - expect).abs() < 1e-14, "{a} {b}");
        }
    }
}
