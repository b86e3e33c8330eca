//! Loading one integral table per path k-point from a directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{parse_kfcidump, write_kfcidump, IntegralTable, KPoint};

pub const PATH_FILE: &str = "path.json";

/// One entry of `path.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub label: String,
    /// Fractional reciprocal coordinates, used for plotting and output only.
    pub k: [f64; 3],
    /// Table file relative to the directory.
    pub file: String,
    /// Mesh point of the table holding the target momentum; Γ by default.
    #[serde(default)]
    pub mesh_k: [usize; 3],
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct KPath {
    pub points: Vec<PathPoint>,
}

#[derive(Clone, Debug)]
pub struct FixturePoint {
    pub point: PathPoint,
    pub table: IntegralTable,
}

impl FixturePoint {
    pub fn target(&self) -> KPoint {
        KPoint(self.point.mesh_k)
    }
}

/// Reads `path.json` when present, otherwise every `*.kfcidump` in name
/// order with the file stem as label and `k = (0, 0, i)`.
pub fn load_fixture_dir(dir: impl AsRef<Path>) -> Result<Vec<FixturePoint>> {
    let dir = dir.as_ref();
    let path_file = dir.join(PATH_FILE);
    let path = if path_file.exists() {
        let text = fs::read_to_string(&path_file).map_err(|e| Error::io(&path_file, e))?;
        serde_json::from_str::<KPath>(&text)?
    } else {
        let mut files: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "kfcidump"))
            .collect();
        files.sort();
        KPath {
            points: files
                .iter()
                .enumerate()
                .map(|(i, f)| PathPoint {
                    label: f
                        .file_stem()
                        .unwrap_or_default()
                        .to_string_lossy()
                        .into_owned(),
                    k: [0.0, 0.0, i as f64],
                    file: f
                        .file_name()
                        .unwrap_or_default()
                        .to_string_lossy()
                        .into_owned(),
                    mesh_k: [0, 0, 0],
                })
                .collect(),
        }
    };
    if path.points.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no k-point fixtures in {}",
            dir.display()
        )));
    }
    path.points
        .into_iter()
        .map(|point| {
            let table = parse_kfcidump(dir.join(&point.file))?;
            if !table.mesh.contains(KPoint(point.mesh_k)) {
                return Err(Error::InvalidInput(format!(
                    "{}: mesh_k {:?} outside mesh {:?}",
                    point.label,
                    point.mesh_k,
                    table.mesh.dims()
                )));
            }
            Ok(FixturePoint { point, table })
        })
        .collect()
}

/// Writes the tables and a matching `path.json`.
pub fn write_fixture_dir(
    dir: impl AsRef<Path>,
    points: &[(PathPoint, IntegralTable)],
) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (p, t) in points {
        write_kfcidump(t, dir.join(&p.file))?;
    }
    let path = KPath {
        points: points.iter().map(|(p, _)| p.clone()).collect(),
    };
    let file = dir.join(PATH_FILE);
    fs::write(&file, serde_json::to_string_pretty(&path)?).map_err(|e| Error::io(&file, e))
}
