//! Trajectories on disk: one TFWG file per time node in a directory, plus a
//! JSON manifest next to it listing times, norms, state files (relative to
//! the manifest) and run diagnostics.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tfwave_core::nlw::Trajectory;

use crate::error::{HarnessError, HarnessResult};
use crate::io::{read_grid, write_grid};
use crate::report::{write_json, OutputPaths};

pub const MANIFEST_FORMAT: &str = "tfwave-trajectory";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format: String,
    pub version: u32,
    pub d: usize,
    pub n: usize,
    pub l: f64,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub states: Vec<String>,
    pub diagnostics: serde_json::Value,
}

/// Writes the states under `paths.dir()` and the manifest to `paths.json()`.
pub fn write_trajectory(paths: &OutputPaths, traj: &Trajectory, diagnostics: serde_json::Value) -> HarnessResult<Manifest> {
    let dir = paths.dir();
    let dir_name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .ok_or_else(|| HarnessError::Config(format!("bad output path {}", dir.display())))?;
    let Some(first) = traj.states.first() else {
        return Err(HarnessError::Config("empty trajectory".into()));
    };
    let spec = first.spec();
    let mut states = Vec::with_capacity(traj.len());
    for (i, u) in traj.states.iter().enumerate() {
        let name = format!("state_{i:04}.tfwg");
        write_grid(&dir.join(&name), u)?;
        states.push(format!("{dir_name}/{name}"));
    }
    let manifest = Manifest {
        format: MANIFEST_FORMAT.into(),
        version: 1,
        d: spec.d(),
        n: spec.n(),
        l: spec.l(),
        times: traj.times.clone(),
        norms: traj.norms.clone(),
        states,
        diagnostics,
    };
    write_json(&paths.json(), &manifest)?;
    Ok(manifest)
}

pub fn read_trajectory(manifest_path: &Path) -> HarnessResult<(Trajectory, Manifest)> {
    let text = std::fs::read_to_string(manifest_path).map_err(|e| HarnessError::io(manifest_path, e))?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| HarnessError::format(manifest_path, e.to_string()))?;
    if manifest.format != MANIFEST_FORMAT {
        return Err(HarnessError::format(manifest_path, "not a trajectory manifest"));
    }
    if manifest.times.len() != manifest.states.len() || manifest.norms.len() != manifest.states.len() {
        return Err(HarnessError::format(manifest_path, "times, norms and states differ in length"));
    }
    let root = manifest_path.parent().unwrap_or(Path::new("."));
    let states = manifest
        .states
        .iter()
        .map(|s| read_grid(&root.join(s)))
        .collect::<HarnessResult<Vec<_>>>()?;
    Ok((
        Trajectory {
            times: manifest.times.clone(),
            states,
            norms: manifest.norms.clone(),
        },
        manifest,
    ))
}
