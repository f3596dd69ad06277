use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("grid functions live on different grids")]
    SpecMismatch,
    #[error("expected a {expected} grid function, found {found}")]
    DomainMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("invalid exponent {0}")]
    InvalidExponent(f64),
    #[error("exponent {0} lies in the quasi-Banach range 0 < p < 1, which is not supported")]
    UnsupportedExponent(f64),
    #[error("exponent mismatch: {0}")]
    ExponentMismatch(String),
    #[error("incompatible lattice: {0}")]
    IncompatibleLattice(&'static str),
    #[error("amalgam norms need a compactly supported window")]
    WindowNotCompactlySupported,
    #[error("embedding condition d/q - d/r < 1 fails (d = {d}, q = {q}, r = {r})")]
    EmbeddingConditionFailed { d: usize, q: f64, r: f64 },
    #[error("function is not supported in a ball of radius {radius}: mass {mass:e} outside")]
    SupportTooLarge { radius: f64, mass: f64 },
    #[error("invalid symbol parameters alpha = {alpha}, delta = {delta} (need delta <= alpha <= 1, alpha > 0)")]
    InvalidSymbolParams { alpha: f64, delta: f64 },
    #[error("sampled symbol evaluated away from its grid")]
    SymbolOffGrid,
    #[error("input and output norm specs are of different kinds")]
    SpecKindMismatch,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("Picard iteration did not contract within {iterations} iterations (last difference {last_difference:e})")]
    ContractionFailure {
        iterations: usize,
        last_difference: f64,
    },
    #[error("reference integration blew up at t = {time}")]
    BlowupDetected { time: f64 },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
}
