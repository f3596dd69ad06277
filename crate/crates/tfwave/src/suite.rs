//! The fixed experiment lists behind `calibrate-all` and `verify-all`.

use std::path::Path;

use crate::config::{ExpArg, ExperimentConfig, Kind, Space, Theorem};
use crate::error::HarnessResult;
use crate::experiments::{calibrate, run, Outcome};
use crate::report::OutputPaths;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEntry {
    pub name: String,
    pub config: ExperimentConfig,
}

fn entry(name: impl Into<String>, kind: Kind, edit: impl FnOnce(&mut ExperimentConfig)) -> SuiteEntry {
    let mut config = ExperimentConfig::for_kind(kind);
    edit(&mut config);
    SuiteEntry {
        name: name.into(),
        config,
    }
}

/// Ratio experiments with a stored constant.
pub fn calibration_suite() -> Vec<SuiteEntry> {
    let mut out = vec![
        entry("product-mod", Kind::ProductCheck, |_| {}),
        entry("product-am", Kind::ProductCheck, |c| c.space = Some(Space::Am)),
        entry("embedding", Kind::EmbeddingCheck, |_| {}),
    ];
    for (sym, tag) in [("sinpow:1:1", "sinpow"), ("cos", "cos")] {
        for (p, ptag) in [(1.0, "1"), (2.0, "2"), (f64::INFINITY, "inf")] {
            out.push(entry(format!("multiplier-{tag}-p{ptag}"), Kind::MultiplierCheck, |c| {
                c.symbol = Some(sym.into());
                c.in_spec = Some(format!("mod:{},1,0", if p.is_infinite() { "inf".into() } else { p.to_string() }));
            }));
        }
    }
    out.push(entry("lipschitz-probe", Kind::LipschitzProbe, |_| {}));
    for (t, tag) in [(Theorem::T1, "t1"), (Theorem::T2, "t2"), (Theorem::T3, "t3")] {
        out.push(entry(format!("solution-lipschitz-{tag}"), Kind::SolutionLipschitz, |c| {
            c.theorem = Some(t)
        }));
    }
    for r in [1.0, 2.0, 4.0] {
        out.push(entry(format!("lemma-l3-r{r}"), Kind::LemmaL3, |c| c.radius = Some(r)));
    }
    out.push(entry("monotonicity", Kind::Monotonicity, |_| {}));
    out.push(entry("osc-decay", Kind::OscDecay, |_| {}));
    out
}

/// Everything checked by `verify-all`: the calibrated experiments on
/// verification seeds plus the self-checking ones.
pub fn verification_suite() -> Vec<SuiteEntry> {
    let mut out = vec![
        entry("norms-m22", Kind::Norms, |c| c.f = Some("gabor".into())),
        entry("symbol-norm-sinpow", Kind::SymbolNorm, |c| c.symbol = Some("sinpow:1:1".into())),
        entry("symbol-norm-cos", Kind::SymbolNorm, |c| c.symbol = Some("cos".into())),
        entry("embedding-exact", Kind::EmbeddingCheck, |c| {
            c.q = Some(ExpArg(2.0));
            c.r = Some(ExpArg(2.0));
        }),
    ];
    out.extend(calibration_suite());
    for (t, tag) in [(Theorem::T1, "t1"), (Theorem::T2, "t2"), (Theorem::T3, "t3")] {
        for (lambda, ltag) in [(1.0, "plus"), (-1.0, "minus")] {
            out.push(entry(format!("reference-{tag}-{ltag}"), Kind::ReferenceCompare, |c| {
                c.theorem = Some(t);
                c.lambda = Some(lambda);
            }));
        }
    }
    out
}

#[derive(Debug)]
pub struct SuiteResult {
    pub name: String,
    pub outcome: HarnessResult<Outcome>,
}

/// Verifies every entry, writing reports to `out_dir/<name>` when given.
pub fn verify_all(cal_dir: Option<&Path>, out_dir: Option<&Path>, mut progress: impl FnMut(&SuiteResult)) -> Vec<SuiteResult> {
    verification_suite()
        .into_iter()
        .map(|e| {
            let paths = out_dir.map(|d| OutputPaths::new(&d.join(&e.name)));
            let result = SuiteResult {
                outcome: run(&e.config, cal_dir, paths.as_ref()),
                name: e.name,
            };
            progress(&result);
            result
        })
        .collect()
}

/// Calibrates every entry of [`calibration_suite`].
pub fn calibrate_all(
    cal_dir: Option<&Path>,
    force: bool,
    out_dir: Option<&Path>,
    mut progress: impl FnMut(&SuiteResult),
) -> Vec<SuiteResult> {
    calibration_suite()
        .into_iter()
        .map(|e| {
            let paths = out_dir.map(|d| OutputPaths::new(&d.join(&e.name)));
            let result = SuiteResult {
                outcome: calibrate(&e.config, cal_dir, force, paths.as_ref()).map(|(_, o)| o),
                name: e.name,
            };
            progress(&result);
            result
        })
        .collect()
}

/// `0` if everything passed, otherwise the largest failure code: `1` for
/// failed checks, the error's exit code for errors.
pub fn exit_code(results: &[SuiteResult]) -> i32 {
    results
        .iter()
        .map(|r| match &r.outcome {
            Ok(o) if o.pass => 0,
            Ok(_) => 1,
            Err(e) => e.exit_code(),
        })
        .max()
        .unwrap_or(0)
}
