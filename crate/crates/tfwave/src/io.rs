//! Grid function files and atomic writes.
//!
//! Binary `.tfwg` layout, all little-endian:
//!
//! | bytes   | content                         |
//! |---------|---------------------------------|
//! | 0..4    | magic `TFWG`                    |
//! | 4..8    | format version (`u32`, = 1)     |
//! | 8..12   | `d` (`u32`)                     |
//! | 12..16  | `n` (`u32`)                     |
//! | 16..24  | `l` (`f64`)                     |
//! | 24..    | `n^d` pairs `(re, im)` of `f64`, row-major |
//!
//! Binary files always hold spatial samples. The JSON form is
//! `{"d": .., "n": .., "l": .., "values": [[re, im], ..]}` with an optional
//! `"domain"` (`"spatial"` or `"frequency"`, default spatial).

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tfwave_core::grid::{Domain, GridFunction, GridSpec};
use tfwave_core::Complex64;

use crate::error::{HarnessError, HarnessResult};

pub const MAGIC: &[u8; 4] = b"TFWG";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 24;

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> HarnessResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| HarnessError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| HarnessError::io(path, e))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        fs::set_permissions(tmp.path(), fs::Permissions::from_mode(0o644)).map_err(|e| HarnessError::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| HarnessError::io(path, e.error))?;
    Ok(())
}

pub fn encode_tfwg(f: &GridFunction) -> HarnessResult<Vec<u8>> {
    f.ensure_domain(Domain::Spatial)?;
    let spec = f.spec();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * spec.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(spec.d() as u32).to_le_bytes());
    out.extend_from_slice(&(spec.n() as u32).to_le_bytes());
    out.extend_from_slice(&spec.l().to_le_bytes());
    for v in f.values() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    Ok(out)
}

/// `path` only labels errors.
pub fn decode_tfwg(bytes: &[u8], path: &Path) -> HarnessResult<GridFunction> {
    if bytes.len() < HEADER_LEN || &bytes[0..4] != MAGIC {
        return Err(HarnessError::format(path, "not a TFWG file"));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let f64_at = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(HarnessError::format(path, format!("unsupported TFWG version {version}")));
    }
    let spec = GridSpec::new(u32_at(8) as usize, u32_at(12) as usize, f64_at(16))?;
    let expected = HEADER_LEN + 16 * spec.len();
    if bytes.len() != expected {
        return Err(HarnessError::format(
            path,
            format!("expected {expected} bytes for {spec:?}, found {}", bytes.len()),
        ));
    }
    let values = (0..spec.len())
        .map(|i| {
            let at = HEADER_LEN + 16 * i;
            Complex64::new(f64_at(at), f64_at(at + 8))
        })
        .collect();
    Ok(GridFunction::from_values(spec, Domain::Spatial, values)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridJson {
    pub d: usize,
    pub n: usize,
    pub l: f64,
    #[serde(default = "spatial", skip_serializing_if = "is_spatial")]
    pub domain: String,
    pub values: Vec<[f64; 2]>,
}

fn spatial() -> String {
    "spatial".into()
}

fn is_spatial(s: &str) -> bool {
    s == "spatial"
}

impl GridJson {
    pub fn from_grid(f: &GridFunction) -> Self {
        let spec = f.spec();
        Self {
            d: spec.d(),
            n: spec.n(),
            l: spec.l(),
            domain: f.domain().name().into(),
            values: f.values().iter().map(|v| [v.re, v.im]).collect(),
        }
    }

    pub fn into_grid(self, path: &Path) -> HarnessResult<GridFunction> {
        let domain = match self.domain.as_str() {
            "spatial" => Domain::Spatial,
            "frequency" => Domain::Frequency,
            other => return Err(HarnessError::format(path, format!("unknown domain {other:?}"))),
        };
        let spec = GridSpec::new(self.d, self.n, self.l)?;
        if self.values.len() != spec.len() {
            return Err(HarnessError::format(
                path,
                format!("expected {} values, found {}", spec.len(), self.values.len()),
            ));
        }
        let values = self.values.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        Ok(GridFunction::from_values(spec, domain, values)?)
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads a `.json` file as JSON and anything else as TFWG.
pub fn read_grid(path: &Path) -> HarnessResult<GridFunction> {
    let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    if is_json(path) {
        let parsed: GridJson =
            serde_json::from_slice(&bytes).map_err(|e| HarnessError::format(path, e.to_string()))?;
        parsed.into_grid(path)
    } else {
        decode_tfwg(&bytes, path)
    }
}

/// Writes JSON for `.json` paths and TFWG otherwise.
pub fn write_grid(path: &Path, f: &GridFunction) -> HarnessResult<()> {
    let bytes = if is_json(path) {
        serde_json::to_vec(&GridJson::from_grid(f))?
    } else {
        encode_tfwg(f)?
    };
    write_atomic(path, &bytes)
}
