//! Versioned store of calibrated constants.
//!
//! The store is one JSON file, `calibration.json`, in a directory chosen by
//! `--cal-dir`, else the `TFWAVE_CAL_DIR` environment variable, else the
//! copy shipped with this crate. Entries are only ever appended; the newest
//! version of a fingerprint is the one in force.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Kind;
use crate::error::{HarnessError, HarnessResult};
use crate::io::write_atomic;

pub const CAL_DIR_ENV: &str = "TFWAVE_CAL_DIR";
pub const STORE_FILE: &str = "calibration.json";
/// Calibrated constant = largest calibration ratio times this.
pub const SAFETY_FACTOR: f64 = 1.25;
/// First seed of calibration runs; verification runs default to small
/// seeds, far below.
pub const CAL_SEED_BASE: u64 = 0x5EED_0000_0000;

pub fn shipped_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("calibration")
}

/// `explicit`, else `$TFWAVE_CAL_DIR`, else [`shipped_dir`].
pub fn resolve_dir(explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    match std::env::var_os(CAL_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => shipped_dir(),
    }
}

/// `kind:` followed by the first 16 hex digits of SHA-256 over the kind
/// and the canonical (key-sorted) JSON of the parameters.
pub fn fingerprint(kind: Kind, params: &serde_json::Value) -> String {
    let canonical = serde_json::to_string(params).expect("JSON values always serialize");
    let mut h = Sha256::new();
    h.update(kind.name().as_bytes());
    h.update(b"\n");
    h.update(canonical.as_bytes());
    let digest = h.finalize();
    let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
    format!("{}:{hex}", kind.name())
}

/// Half-open range `start..end` of trial seeds touched by a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub start: u64,
    pub end: u64,
}

impl SeedRange {
    pub fn new(start: u64, len: u64) -> Self {
        Self {
            start,
            end: start.saturating_add(len),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &SeedRange) -> bool {
        !self.is_empty() && !other.is_empty() && self.start < other.end && other.start < self.end
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationEntry {
    pub fingerprint: String,
    pub kind: Kind,
    pub params: serde_json::Value,
    pub version: u32,
    pub c_cal: f64,
    pub max_ratio: f64,
    pub safety_factor: f64,
    pub seeds: SeedRange,
    pub trials: usize,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StoreFile {
    entries: Vec<CalibrationEntry>,
}

#[derive(Debug)]
pub struct CalibrationStore {
    dir: PathBuf,
    entries: Vec<CalibrationEntry>,
}

impl CalibrationStore {
    /// Loads the store in `dir`; a missing file is an empty store.
    pub fn open(dir: &Path) -> HarnessResult<Self> {
        let path = dir.join(STORE_FILE);
        let entries = match std::fs::read(&path) {
            Ok(bytes) => {
                serde_json::from_slice::<StoreFile>(&bytes)
                    .map_err(|e| HarnessError::format(&path, e.to_string()))?
                    .entries
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(HarnessError::io(&path, e)),
        };
        Ok(Self {
            dir: dir.to_path_buf(),
            entries,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entries(&self) -> &[CalibrationEntry] {
        &self.entries
    }

    /// Newest entry for `fingerprint`.
    pub fn lookup(&self, fingerprint: &str) -> Option<&CalibrationEntry> {
        self.entries
            .iter()
            .filter(|e| e.fingerprint == fingerprint)
            .max_by_key(|e| e.version)
    }

    /// Appends a new version of the entry. Without `force` an existing
    /// fingerprint is refused.
    pub fn record(
        &mut self,
        kind: Kind,
        params: serde_json::Value,
        max_ratio: f64,
        seeds: SeedRange,
        trials: usize,
        force: bool,
    ) -> HarnessResult<CalibrationEntry> {
        let fp = fingerprint(kind, &params);
        let version = match self.lookup(&fp) {
            Some(_) if !force => {
                return Err(HarnessError::Config(format!(
                    "{fp} is already calibrated; pass --force to add a new version"
                )))
            }
            Some(e) => e.version + 1,
            None => 1,
        };
        let entry = CalibrationEntry {
            fingerprint: fp,
            kind,
            params,
            version,
            c_cal: max_ratio * SAFETY_FACTOR,
            max_ratio,
            safety_factor: SAFETY_FACTOR,
            seeds,
            trials,
        };
        self.entries.push(entry.clone());
        Ok(entry)
    }

    pub fn save(&self) -> HarnessResult<()> {
        let file = StoreFile {
            entries: self.entries.clone(),
        };
        let mut text = serde_json::to_string_pretty(&file)?;
        text.push('\n');
        write_atomic(&self.dir.join(STORE_FILE), text.as_bytes())
    }

    /// Latest constant per fingerprint.
    pub fn current(&self) -> BTreeMap<&str, &CalibrationEntry> {
        let mut out: BTreeMap<&str, &CalibrationEntry> = BTreeMap::new();
        for e in &self.entries {
            let slot = out.entry(e.fingerprint.as_str()).or_insert(e);
            if e.version > slot.version {
                *slot = e;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn fingerprints_ignore_key_order() {
        let a = fingerprint(Kind::ProductCheck, &json!({"p": 1, "q": 2}));
        let b: serde_json::Value = serde_json::from_str(r#"{"q": 2, "p": 1}"#).unwrap();
        assert_eq!(a, fingerprint(Kind::ProductCheck, &b));
        assert_ne!(a, fingerprint(Kind::EmbeddingCheck, &b));
        assert!(a.starts_with("product-check:"));
        assert_eq!(a.len(), "product-check:".len() + 16);
    }

    #[test]
    fn seed_ranges() {
        let a = SeedRange::new(10, 5);
        assert!(a.overlaps(&SeedRange::new(14, 1)));
        assert!(!a.overlaps(&SeedRange::new(15, 3)));
        assert!(!a.overlaps(&SeedRange::new(0, 0)));
    }

    #[test]
    fn append_only_versions() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = CalibrationStore::open(dir.path()).unwrap();
        let params = json!({"x": 1});
        let seeds = SeedRange::new(CAL_SEED_BASE, 4);
        let e1 = store.record(Kind::Monotonicity, params.clone(), 2.0, seeds, 4, false).unwrap();
        assert_eq!((e1.version, e1.c_cal), (1, 2.5));
        let refused = store.record(Kind::Monotonicity, params.clone(), 3.0, seeds, 4, false);
        assert_eq!(refused.unwrap_err().exit_code(), 2);
        let e2 = store.record(Kind::Monotonicity, params.clone(), 3.0, seeds, 4, true).unwrap();
        assert_eq!(e2.version, 2);
        store.save().unwrap();
        let again = CalibrationStore::open(dir.path()).unwrap();
        assert_eq!(again.entries().len(), 2);
        assert_eq!(again.lookup(&e1.fingerprint).unwrap().c_cal, 3.75);
        assert_eq!(again.current().len(), 1);
    }
}
