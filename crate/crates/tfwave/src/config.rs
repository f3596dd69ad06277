use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use tfwave_core::grid::GridSpec;

use crate::error::{HarnessError, HarnessResult};
use crate::specs::{parse_exponent_value, parse_norm_spec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Norms,
    ProductCheck,
    EmbeddingCheck,
    MultiplierCheck,
    SymbolNorm,
    Solve,
    ReferenceCompare,
    LipschitzProbe,
    SolutionLipschitz,
    LemmaL3,
    Monotonicity,
    OscDecay,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Norms => "norms",
            Kind::ProductCheck => "product-check",
            Kind::EmbeddingCheck => "embedding-check",
            Kind::MultiplierCheck => "multiplier-check",
            Kind::SymbolNorm => "symbol-norm",
            Kind::Solve => "solve",
            Kind::ReferenceCompare => "reference-compare",
            Kind::LipschitzProbe => "lipschitz-probe",
            Kind::SolutionLipschitz => "solution-lipschitz",
            Kind::LemmaL3 => "lemma-l3",
            Kind::Monotonicity => "monotonicity",
            Kind::OscDecay => "osc-decay",
        }
    }

    /// Kinds whose result is a list of ratios checked against a calibrated
    /// constant.
    pub fn is_ratio(self) -> bool {
        matches!(
            self,
            Kind::ProductCheck
                | Kind::EmbeddingCheck
                | Kind::MultiplierCheck
                | Kind::LipschitzProbe
                | Kind::SolutionLipschitz
                | Kind::LemmaL3
                | Kind::Monotonicity
                | Kind::OscDecay
        )
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An exponent in `[1, ∞]` given as a number or as `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpArg(pub f64);

impl FromStr for ExpArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_exponent_value(s).map(ExpArg).map_err(|e| e.to_string())
    }
}

impl Serialize for ExpArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExpArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(ExpArg(x)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Mod,
    Am,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    T1,
    T2,
    T3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureArg {
    Trapezoid,
    Simpson,
}

/// Every experiment parameter. Unset fields fall back to per-kind
/// defaults; see [`crate::experiments`].
///
/// On the command line these are flags; in a `--config` file they are the
/// keys of one JSON object. Flags win over the file.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentConfig {
    /// JSON file with default values for these flags
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,

    /// Spatial dimension (1 or 2)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Samples per axis
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Box side length
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Report path (extension optional); for multiplier-check a norm spec
    /// such as `mod:p=2,q=1,s=1` is read as the output space
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    /// Report path, when `--out` names a norm spec
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,

    /// Test function: gaussian, bump, gabor, zero, or a .tfwg/.json file
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    /// Initial velocity for solver runs (same forms as --f)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f1: Option<String>,
    /// Norm spec, e.g. mod:2,2,0 or am:q=1,s=0,p=2,gamma=0
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    /// Input space of a multiplier
    #[arg(long = "in")]
    #[serde(rename = "in", skip_serializing_if = "Option::is_none")]
    pub in_spec: Option<String>,
    /// Output space of a multiplier
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_spec: Option<String>,
    /// Symbol: sinpow:A:D, cos, wavecos:T, wavesinc:T, one, const:C
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,

    /// Number of factors in a product estimate
    #[arg(long = "N", alias = "factors")]
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub factors: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<Space>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<ExpArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<ExpArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<ExpArg>,
    /// Larger exponents for the monotonicity check
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p2: Option<ExpArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q2: Option<ExpArg>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<Theorem>,
    /// Power of the nonlinearity λ|u|^{2k}u
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Final time
    #[arg(long = "T")]
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    /// Time nodes
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nt: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureArg>,
    /// Monitor-norm size of the initial position
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    /// Size of data perturbations in the Lipschitz run
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Reference integrator step
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Acceptance tolerance: sup-t L² gap for reference-compare, relative
    /// change for symbol-norm
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,

    /// Translates considered by symbol norms, |x_i| ≤ xi-max
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_max: Option<f64>,
    /// Support radius for lemma-l3
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

impl ExperimentConfig {
    pub fn for_kind(kind: Kind) -> Self {
        Self {
            kind: Some(kind),
            ..Self::default()
        }
    }

    /// Values from `file` where `self` leaves them unset.
    pub fn over(self, file: ExperimentConfig) -> HarnessResult<Self> {
        let mut base = serde_json::to_value(&file)?;
        let top = serde_json::to_value(&self)?;
        if let (Some(b), Some(t)) = (base.as_object_mut(), top.as_object()) {
            for (k, v) in t {
                b.insert(k.clone(), v.clone());
            }
        }
        let mut merged: ExperimentConfig = serde_json::from_value(base)?;
        merged.config = self.config;
        Ok(merged)
    }

    /// Applies the `--config` file, if any.
    pub fn resolve_file(self) -> HarnessResult<Self> {
        match self.config.clone() {
            None => Ok(self),
            Some(path) => {
                let file = load_config(&path)?;
                if let (Some(a), Some(b)) = (self.kind, file.kind) {
                    if a != b {
                        return Err(HarnessError::Config(format!(
                            "{}: config is for {b}, command is {a}",
                            path.display()
                        )));
                    }
                }
                self.over(file)
            }
        }
    }

    /// Output space of a multiplier check: `--out-spec`, or `--out` when it
    /// reads as a norm spec.
    pub fn output_spec(&self) -> Option<&str> {
        self.out_spec.as_deref().or_else(|| self.out.as_deref().filter(|o| self.out_is_spec(o)))
    }

    /// Report location: `--report`, else `--out` unless that names a norm spec.
    pub fn report_path(&self) -> Option<PathBuf> {
        self.report
            .clone()
            .or_else(|| self.out.as_deref().filter(|o| !self.out_is_spec(o)).map(PathBuf::from))
    }

    fn out_is_spec(&self, out: &str) -> bool {
        self.kind == Some(Kind::MultiplierCheck) && parse_norm_spec(out).is_ok()
    }

    pub fn dim(&self) -> usize {
        self.d.unwrap_or(1)
    }

    /// `n = 512, l = 32` in one dimension and `n = 128, l = 16` in two,
    /// unless overridden.
    pub fn grid(&self) -> HarnessResult<GridSpec> {
        self.grid_with(512, 32.0)
    }

    pub fn grid_with(&self, n1: usize, l1: f64) -> HarnessResult<GridSpec> {
        let d = self.dim();
        let (n, l) = match d {
            1 => (n1, l1),
            _ => (128, 16.0),
        };
        Ok(GridSpec::new(d, self.n.unwrap_or(n), self.l.unwrap_or(l))?)
    }
}

pub fn load_config(path: &Path) -> HarnessResult<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
}
