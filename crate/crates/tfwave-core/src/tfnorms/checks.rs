#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::format;

use super::norms::{AmalgamSpec, ModulationSpec, NormContext, NormSpec};
use super::{amalgam_norm, fl_norm, Window};
use crate::grid::{spectral_derivative, Domain, Exponent, GridFunction};
use crate::{Error, Result};

/// One side-by-side evaluation of an inequality `lhs ≲ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSample {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl RatioSample {
    /// `ratio = lhs/rhs`, with `0/0 = 0`.
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
        Self { lhs, rhs, ratio }
    }
}

/// Which mixed-norm scale a product estimate is stated in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductSpace {
    Modulation,
    Amalgam { gamma: f64 },
}

const NUMEROLOGY_TOL: f64 = 1e-12;

/// Checks `‖u_1⋯u_N‖ ≤ C ∏ ‖u_i‖` with `N/q = N - 1 + 1/r`.
///
/// The left side is measured in `M^{p,r}_s` (or `W(FL^r_s, L^p_γ)`), each
/// factor in `M^{Np,q}_s` (or `W(FL^q_s, L^{Np}_{γ/N})`).
pub fn check_product_estimate(
    us: &[GridFunction],
    p: Exponent,
    r: Exponent,
    q: Exponent,
    s: f64,
    ctx: &NormContext,
    space: ProductSpace,
) -> Result<RatioSample> {
    let n = us.len();
    if n == 0 {
        return Err(Error::ExponentMismatch("product of zero factors".into()));
    }
    let nf = n as f64;
    let lhs_recip = nf * q.recip();
    let rhs_recip = nf - 1.0 + r.recip();
    if (lhs_recip - rhs_recip).abs() > NUMEROLOGY_TOL {
        return Err(Error::ExponentMismatch(format!(
            "N/q = {lhs_recip} but N - 1 + 1/r = {rhs_recip} for N = {n}"
        )));
    }
    if s < 0.0 {
        return Err(Error::ExponentMismatch(format!("weight s = {s} must be nonnegative")));
    }
    let pn = Exponent::from_recip(p.recip() / nf)?;
    let (lhs_spec, factor_spec) = match space {
        ProductSpace::Modulation => (
            NormSpec::Modulation(ModulationSpec { p, q: r, s }),
            NormSpec::Modulation(ModulationSpec { p: pn, q, s }),
        ),
        ProductSpace::Amalgam { gamma } => {
            if gamma < 0.0 {
                return Err(Error::ExponentMismatch(format!("weight γ = {gamma} must be nonnegative")));
            }
            (
                NormSpec::Amalgam(AmalgamSpec { q: r, s, p, gamma }),
                NormSpec::Amalgam(AmalgamSpec {
                    q,
                    s,
                    p: pn,
                    gamma: gamma / nf,
                }),
            )
        }
    };
    let mut product = us[0].clone();
    for u in &us[1..] {
        product = product.mul(u)?;
    }
    let lhs = ctx.norm(&product, &lhs_spec)?;
    let mut rhs = 1.0;
    for u in us {
        rhs *= ctx.norm(u, &factor_spec)?;
    }
    Ok(RatioSample::new(lhs, rhs))
}

/// Compares `‖f‖_{W(FL^q_{s-1}, L^p_γ)}` (lhs) with `‖f‖_{W(FL^r_s, L^p_γ)}`
/// (rhs); the embedding needs `d/q - d/r < 1`.
pub fn check_embedding(
    f: &GridFunction,
    r: Exponent,
    q: Exponent,
    s: f64,
    gamma: f64,
    p: Exponent,
    g: &Window,
) -> Result<RatioSample> {
    let d = f.spec().d() as f64;
    if d * q.recip() - d * r.recip() >= 1.0 {
        return Err(Error::EmbeddingConditionFailed {
            d: f.spec().d(),
            q: q.value(),
            r: r.value(),
        });
    }
    let lhs = amalgam_norm(f, g, &AmalgamSpec { q, s: s - 1.0, p, gamma })?;
    let rhs = amalgam_norm(f, g, &AmalgamSpec { q: r, s, p, gamma })?;
    Ok(RatioSample::new(lhs, rhs))
}

/// Smallest `k` with `2kp > d`, the derivative order that makes
/// `⟨ξ⟩^{-2k}` lie in `L^p(R^d)`.
pub fn lemma_l3_order(p: Exponent, d: usize) -> u32 {
    if p.is_infinite() {
        return 0;
    }
    let mut k = 0u32;
    while 2.0 * k as f64 * p.value() <= d as f64 {
        k += 1;
    }
    k
}

/// Mass of `|f|` outside the ball of this radius around the center of its
/// numerical support must stay below this.
pub const SUPPORT_MASS_TOL: f64 = 1e-10;

/// Local `FL^p` bound by derivatives for a function supported in a ball of
/// radius `radius`: lhs `‖f‖_{FL^p}`, rhs `max_{|α| ≤ 2k} ‖∂^α f‖_∞`.
///
/// The ball is centered at the midpoint of the bounding box of the samples
/// where `|f|` exceeds `1e-14·‖f‖_∞`.
pub fn lemma_l3_bound(f: &GridFunction, p: Exponent, radius: f64, k: u32) -> Result<RatioSample> {
    f.ensure_domain(Domain::Spatial)?;
    let spec = f.spec();
    let sup = f.sup_norm();
    if sup == 0.0 {
        return Ok(RatioSample::new(0.0, 0.0));
    }
    let d = spec.d();
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for (idx, v) in f.values().iter().enumerate() {
        if v.norm() > 1e-14 * sup {
            let x = spec.point(idx, Domain::Spatial);
            for a in 0..d {
                lo[a] = lo[a].min(x[a]);
                hi[a] = hi[a].max(x[a]);
            }
        }
    }
    let center = [0.5 * (lo[0] + hi[0]), if d == 2 { 0.5 * (lo[1] + hi[1]) } else { 0.0 }];
    let cell = spec.cell(Domain::Spatial);
    let mut outside = 0.0;
    for (idx, v) in f.values().iter().enumerate() {
        let x = spec.point(idx, Domain::Spatial);
        let r2 = (x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2);
        if r2 > radius * radius {
            outside += v.norm() * cell;
        }
    }
    if outside > SUPPORT_MASS_TOL {
        return Err(Error::SupportTooLarge { radius, mass: outside });
    }
    let lhs = fl_norm(f, p, 0.0)?;
    let order = 2 * k;
    let mut rhs: f64 = 0.0;
    for a1 in 0..=order {
        let a2_max = if d == 2 { order - a1 } else { 0 };
        for a2 in 0..=a2_max {
            let df = if a1 == 0 && a2 == 0 {
                f.clone()
            } else {
                spectral_derivative(f, [a1, a2])?
            };
            rhs = rhs.max(df.sup_norm());
        }
    }
    Ok(RatioSample::new(lhs, rhs))
}
