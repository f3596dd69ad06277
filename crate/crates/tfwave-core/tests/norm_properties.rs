use proptest::prelude::*;
use tfwave_core::grid::{Exponent, GridSpec};
use tfwave_core::sampler::GaborSampler;
use tfwave_core::tfnorms::{fl_norm, AmalgamSpec, ModulationSpec, NormContext, NormSpec};
use tfwave_core::Complex64;

fn spec() -> GridSpec {
    GridSpec::new(1, 64, 8.0).unwrap()
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), Just(f64::INFINITY), 1.0..4.0f64]
}

fn norm_spec() -> impl Strategy<Value = NormSpec> {
    prop_oneof![
        (exponent(), exponent(), -1.0..2.0f64)
            .prop_map(|(p, q, s)| NormSpec::Modulation(ModulationSpec::new(p, q, s).unwrap())),
        (exponent(), -1.0..2.0f64, exponent(), 0.0..2.0f64)
            .prop_map(|(q, s, p, g)| NormSpec::Amalgam(AmalgamSpec::new(q, s, p, g).unwrap())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn homogeneity(seed in any::<u32>(), re in -4.0..4.0f64, im in -4.0..4.0f64, ns in norm_spec(), q in exponent(), s in -1.0..2.0f64) {
        let ctx = NormContext::new(spec());
        let f = GaborSampler::new(spec()).trial(seed as u64, 0);
        let c = Complex64::new(re, im);
        let cf = f.scale(c);
        let a = ctx.norm(&f, &ns).unwrap();
        prop_assert!((ctx.norm(&cf, &ns).unwrap() - c.norm() * a).abs() <= 1e-12 * c.norm() * a);
        let q = Exponent::new(q).unwrap();
        let b = fl_norm(&f, q, s).unwrap();
        prop_assert!((fl_norm(&cf, q, s).unwrap() - c.norm() * b).abs() <= 1e-12 * c.norm() * b);
    }

    #[test]
    fn triangle_inequality(seed in any::<u32>(), ns in norm_spec()) {
        let ctx = NormContext::new(spec());
        let sampler = GaborSampler::new(spec());
        let f = sampler.trial(seed as u64, 0);
        let h = sampler.trial(seed as u64, 1);
        let lhs = ctx.norm(&f.add(&h).unwrap(), &ns).unwrap();
        prop_assert!(lhs <= ctx.norm(&f, &ns).unwrap() + ctx.norm(&h, &ns).unwrap() + 1e-10);
    }
}
