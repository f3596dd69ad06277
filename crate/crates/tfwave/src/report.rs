//! Report files: per-trial CSV (`trial,seed,lhs,rhs,ratio`) and a JSON
//! summary. Reports carry no timestamps, so identical runs give identical
//! bytes.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::calibration::SeedRange;
use crate::error::HarnessResult;
use crate::io::write_atomic;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub trial: usize,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub kind: String,
    pub fingerprint: String,
    pub params: serde_json::Value,
    pub seeds: SeedRange,
    pub trials: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// `None` only for runs without a stored constant and without trials.
    pub calibration_constant: Option<f64>,
    pub calibration_version: Option<u32>,
    pub pass: bool,
    pub extra: serde_json::Value,
}

pub fn max_ratio(rows: &[RatioRow]) -> f64 {
    rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
}

pub fn mean_ratio(rows: &[RatioRow]) -> f64 {
    if rows.is_empty() {
        0.0
    } else {
        rows.iter().map(|r| r.ratio).sum::<f64>() / rows.len() as f64
    }
}

/// Where a run writes: `<base>.json`, `<base>.csv` and the directory
/// `<base>/` for bulk output. A trailing `.json` or `.csv` on the given
/// path is dropped to form the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub base: PathBuf,
}

impl OutputPaths {
    pub fn new(path: &Path) -> Self {
        let base = match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") || e.eq_ignore_ascii_case("csv") => path.with_extension(""),
            _ => path.to_path_buf(),
        };
        Self { base }
    }

    fn with_suffix(&self, suffix: &str) -> PathBuf {
        let mut s = self.base.clone().into_os_string();
        s.push(suffix);
        PathBuf::from(s)
    }

    pub fn json(&self) -> PathBuf {
        self.with_suffix(".json")
    }

    pub fn csv(&self) -> PathBuf {
        self.with_suffix(".csv")
    }

    pub fn dir(&self) -> PathBuf {
        self.base.clone()
    }
}

pub fn csv_bytes(rows: &[RatioRow]) -> HarnessResult<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["trial", "seed", "lhs", "rhs", "ratio"])?;
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner()
        .map_err(|e| csv::Error::from(e.into_error()).into())
}

pub fn write_csv(path: &Path, rows: &[RatioRow]) -> HarnessResult<()> {
    write_atomic(path, &csv_bytes(rows)?)
}

/// CSV with a header row and already formatted cells.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> HarnessResult<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    write_atomic(path, &bytes)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> HarnessResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let rows = [RatioRow {
            trial: 0,
            seed: 7,
            lhs: 1.5,
            rhs: 3.0,
            ratio: 0.5,
        }];
        let text = String::from_utf8(csv_bytes(&rows).unwrap()).unwrap();
        assert_eq!(text, "trial,seed,lhs,rhs,ratio\n0,7,1.5,3.0,0.5\n");
        assert_eq!(String::from_utf8(csv_bytes(&[]).unwrap()).unwrap(), "trial,seed,lhs,rhs,ratio\n");
    }

    #[test]
    fn output_paths() {
        let o = OutputPaths::new(Path::new("runs/run.json"));
        assert_eq!(o.json(), PathBuf::from("runs/run.json"));
        assert_eq!(o.csv(), PathBuf::from("runs/run.csv"));
        assert_eq!(o.dir(), PathBuf::from("runs/run"));
        assert_eq!(OutputPaths::new(Path::new("x")).json(), PathBuf::from("x.json"));
        assert_eq!(OutputPaths::new(Path::new("run.v2")).csv(), PathBuf::from("run.v2.csv"));
    }

    #[test]
    fn summary_statistics() {
        let row = |ratio| RatioRow {
            trial: 0,
            seed: 0,
            lhs: ratio,
            rhs: 1.0,
            ratio,
        };
        assert_eq!(max_ratio(&[]), 0.0);
        assert_eq!(mean_ratio(&[]), 0.0);
        assert_eq!(max_ratio(&[row(1.0), row(3.0)]), 3.0);
        assert_eq!(mean_ratio(&[row(1.0), row(3.0)]), 2.0);
    }
}
