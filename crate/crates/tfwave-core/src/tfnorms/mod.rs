//! Short-time Fourier transform, modulation and Wiener amalgam norms.
//!
//! All mixed norms are Riemann sums over a [`Lattice`] in the
//! time-frequency plane. The default lattice uses every grid point in `x`
//! and every grid frequency in `ξ`, so the STFT rows come straight out of
//! the FFT without interpolation.

mod checks;
mod norms;
mod stft;
mod window;

pub use checks::{
    check_embedding, check_product_estimate, lemma_l3_bound, lemma_l3_order, ProductSpace, RatioSample,
    SUPPORT_MASS_TOL,
};
pub use norms::{
    amalgam_norm, amalgam_norm_strided, fl_norm, modulation_norm, AmalgamSpec, ModulationSpec, NormContext,
    NormSpec,
};
pub use stft::{stft, Lattice, StftCoefficients};
pub use window::{Window, WindowKind};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{weighted_lp_norm, Domain, Exponent, GridFunction, GridSpec, Weight};
    use crate::Error;
    use core::f64::consts::PI;
    use num_complex::Complex64;

    fn gaussian(spec: GridSpec) -> GridFunction {
        GridFunction::from_real_fn(spec, Domain::Spatial, |x| (-PI * (x[0] * x[0] + x[1] * x[1])).exp())
    }

    /// Modulated, translated Gaussian `e^{2πiξ0 x} e^{-π(x-x0)²}`.
    fn atom(spec: GridSpec, x0: f64, xi0: f64) -> GridFunction {
        GridFunction::from_fn(spec, Domain::Spatial, |x| {
            let phase = 2.0 * PI * xi0 * x[0];
            Complex64::new(phase.cos(), phase.sin()) * (-PI * (x[0] - x0).powi(2)).exp()
        })
    }

    fn mixed(spec: GridSpec) -> GridFunction {
        atom(spec, 1.3, 2.0)
            .add(&atom(spec, -2.1, -0.7).scale(Complex64::new(0.4, -1.1)))
            .unwrap()
    }

    #[test]
    fn m22_is_l2() {
        let spec = GridSpec::new(1, 128, 16.0).unwrap();
        let ctx = NormContext::new(spec);
        let f = mixed(spec);
        let m = ctx.norm(&f, &NormSpec::Modulation(ModulationSpec::new(2.0, 2.0, 0.0).unwrap())).unwrap();
        let l2 = weighted_lp_norm(&f, Exponent::TWO, Weight::unweighted());
        assert!((m - l2).abs() <= 1e-10 * l2, "{m} vs {l2}");
    }

    #[test]
    fn gaussian_sup_of_stft() {
        let spec = GridSpec::new(1, 256, 16.0).unwrap();
        let g = Window::gaussian(spec);
        let spec_inf = ModulationSpec::new(f64::INFINITY, f64::INFINITY, 0.0).unwrap();
        let v = modulation_norm(g.g(), &g, &spec_inf, &Lattice::finest()).unwrap();
        assert!((v - 2f64.powf(-0.5)).abs() < 1e-8);
    }

    #[test]
    fn fl_norm_examples() {
        let spec = GridSpec::new(1, 256, 16.0).unwrap();
        let f = gaussian(spec);
        assert!((fl_norm(&f, Exponent::ONE, 0.0).unwrap() - 1.0).abs() < 1e-8);
        assert!((fl_norm(&f, Exponent::TWO, 0.0).unwrap() - 2f64.powf(-0.25)).abs() < 1e-8);
        let zero = GridFunction::zeros(spec, Domain::Spatial);
        assert_eq!(fl_norm(&zero, Exponent::ONE, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn amalgam_of_constant_is_window_integral() {
        let spec = GridSpec::new(1, 128, 16.0).unwrap();
        let g = Window::bump(spec);
        let one = GridFunction::constant(spec, Complex64::new(1.0, 0.0));
        let a = AmalgamSpec::new(f64::INFINITY, 0.0, f64::INFINITY, 0.0).unwrap();
        let v = amalgam_norm(&one, &g, &a).unwrap();
        let integral: f64 = g.g().values().iter().map(|c| c.re).sum::<f64>() * spec.dx();
        assert!((v - integral).abs() < 1e-10, "{v} vs {integral}");
    }

    #[test]
    fn amalgam_rejects_gaussian_window() {
        let spec = GridSpec::new(1, 64, 8.0).unwrap();
        let f = gaussian(spec);
        let a = AmalgamSpec::new(1.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(
            amalgam_norm(&f, &Window::gaussian(spec), &a),
            Err(Error::WindowNotCompactlySupported)
        );
    }

    #[test]
    fn amalgam_is_local() {
        // Same dx, doubled box: a compactly supported f sees no difference.
        let small = GridSpec::new(1, 128, 16.0).unwrap();
        let large = GridSpec::new(1, 256, 32.0).unwrap();
        let bump = |x: crate::grid::Point| WindowKind::Bump.profile([(x[0] - 0.5) / 2.0, 0.0]);
        let a = AmalgamSpec::new(1.0, 0.0, 1.0, 0.0).unwrap();
        let v1 = amalgam_norm(
            &GridFunction::from_real_fn(small, Domain::Spatial, bump),
            &Window::bump(small),
            &a,
        )
        .unwrap();
        let v2 = amalgam_norm(
            &GridFunction::from_real_fn(large, Domain::Spatial, bump),
            &Window::bump(large),
            &a,
        )
        .unwrap();
        assert!((v1 - v2).abs() < 0.01 * v1, "{v1} vs {v2}");
    }

    #[test]
    fn stft_shift_covariance() {
        let spec = GridSpec::new(1, 64, 8.0).unwrap();
        let g = Window::gaussian(spec);
        let f = mixed(spec);
        let (sx, sxi) = (5usize, 3usize);
        let xi0 = sxi as f64 * spec.dxi();
        // M_{ξ0} T_{x0} f with periodic translation by whole grid steps.
        let n = spec.n();
        let shifted = GridFunction::from_values(
            spec,
            Domain::Spatial,
            (0..n)
                .map(|j| {
                    let x = spec.axis_coord(j, Domain::Spatial);
                    let phase = 2.0 * PI * xi0 * x;
                    f.values()[(j + n - sx) % n] * Complex64::new(phase.cos(), phase.sin())
                })
                .collect(),
        )
        .unwrap();
        let v = stft(&f, &g, &Lattice::finest()).unwrap();
        let w = stft(&shifted, &g, &Lattice::finest()).unwrap();
        for ix in 0..n {
            for ixi in 0..n {
                let a = w.get((ix + sx) % n, (ixi + sxi) % n).norm();
                let b = v.get(ix, ixi).norm();
                assert!((a - b).abs() < 1e-12, "{ix} {ixi}");
            }
        }
    }

    #[test]
    fn unit_cell_monotonicity_in_exponents() {
        let spec = GridSpec::new(1, 64, 8.0).unwrap();
        let g = Window::gaussian(spec).normalized();
        let lat = Lattice::finest().with_unit_cells();
        let f = mixed(spec);
        let exps = [1.0, 1.5, 2.0, 4.0, f64::INFINITY];
        for w in exps.windows(2) {
            for &other in &exps {
                let lo = modulation_norm(&f, &g, &ModulationSpec::new(w[0], other, 0.5).unwrap(), &lat).unwrap();
                let hi = modulation_norm(&f, &g, &ModulationSpec::new(w[1], other, 0.5).unwrap(), &lat).unwrap();
                assert!(hi <= lo * (1.0 + 1e-12), "p {} -> {}", w[0], w[1]);
                let lo = modulation_norm(&f, &g, &ModulationSpec::new(other, w[0], 0.5).unwrap(), &lat).unwrap();
                let hi = modulation_norm(&f, &g, &ModulationSpec::new(other, w[1], 0.5).unwrap(), &lat).unwrap();
                assert!(hi <= lo * (1.0 + 1e-12), "q {} -> {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn coarse_lattice_m22() {
        // Strided sums still approximate the integral for a smooth Gaussian.
        let spec = GridSpec::new(1, 128, 16.0).unwrap();
        let ctx = NormContext::new(spec).with_lattice(Lattice::with_strides(2, 2));
        let f = gaussian(spec);
        let m = ctx.norm(&f, &NormSpec::Modulation(ModulationSpec::new(2.0, 2.0, 0.0).unwrap())).unwrap();
        assert!((m - 2f64.powf(-0.25)).abs() < 1e-6);
    }

    #[test]
    fn product_identity_and_numerology() {
        let spec = GridSpec::new(1, 64, 8.0).unwrap();
        let ctx = NormContext::new(spec);
        let f = mixed(spec);
        let two = Exponent::TWO;
        let one = Exponent::ONE;
        let s = check_product_estimate(&[f.clone()], two, one, one, 1.0, &ctx, ProductSpace::Modulation).unwrap();
        assert_eq!(s.lhs, s.rhs);
        assert_eq!(s.ratio, 1.0);
        let s = check_product_estimate(&[f.clone()], two, one, one, 0.0, &ctx, ProductSpace::Amalgam { gamma: 1.0 })
            .unwrap();
        assert_eq!(s.ratio, 1.0);
        assert!(matches!(
            check_product_estimate(&[f.clone(), f.clone()], two, one, two, 0.0, &ctx, ProductSpace::Modulation),
            Err(Error::ExponentMismatch(_))
        ));
        let zero = GridFunction::zeros(spec, Domain::Spatial);
        let s = check_product_estimate(&[f.clone(), zero, f], two, one, one, 0.0, &ctx, ProductSpace::Modulation)
            .unwrap();
        assert_eq!((s.lhs, s.ratio), (0.0, 0.0));
    }

    #[test]
    fn embedding_condition() {
        let spec = GridSpec::new(1, 64, 8.0).unwrap();
        let g = Window::bump(spec);
        let f = mixed(spec);
        let two = Exponent::TWO;
        let one = Exponent::ONE;
        let s = check_embedding(&f, two, two, 0.5, 1.0, one, &g).unwrap();
        assert!(s.ratio <= 1.0 + 1e-10);
        assert!(check_embedding(&f, two, one, 0.0, 0.0, two, &g).is_ok());
        assert!(matches!(
            check_embedding(&f, Exponent::INFINITY, one, 0.0, 0.0, two, &g),
            Err(Error::EmbeddingConditionFailed { .. })
        ));
        let zero = GridFunction::zeros(spec, Domain::Spatial);
        let s = check_embedding(&zero, two, one, 0.0, 0.0, two, &g).unwrap();
        assert_eq!((s.lhs, s.rhs), (0.0, 0.0));
    }

    #[test]
    fn l3_order_and_support() {
        assert_eq!(lemma_l3_order(Exponent::TWO, 1), 1);
        assert_eq!(lemma_l3_order(Exponent::ONE, 2), 2);
        assert_eq!(lemma_l3_order(Exponent::INFINITY, 2), 0);
        let spec = GridSpec::new(1, 128, 16.0).unwrap();
        let wide = gaussian(spec);
        assert!(matches!(
            lemma_l3_bound(&wide, Exponent::TWO, 1.0, 1),
            Err(Error::SupportTooLarge { .. })
        ));
        let zero = GridFunction::zeros(spec, Domain::Spatial);
        assert_eq!(lemma_l3_bound(&zero, Exponent::TWO, 1.0, 1).unwrap().ratio, 0.0);
    }

    #[test]
    fn l3_ratio_stable_under_refinement() {
        let ratio = |n: usize| {
            let spec = GridSpec::new(1, n, 16.0).unwrap();
            let f = GridFunction::from_real_fn(spec, Domain::Spatial, |x| WindowKind::Bump.profile([x[0] - 0.3, 0.0]));
            lemma_l3_bound(&f, Exponent::TWO, 1.0, 1).unwrap().ratio
        };
        let (a, b) = (ratio(256), ratio(512));
        assert!(a.is_finite() && a > 0.0);
        assert!((a - b).abs() < 0.05 * a, "{a} vs {b}");
    }
}
