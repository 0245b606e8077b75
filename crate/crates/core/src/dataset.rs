//! On-disk dataset layout: `<root>/genuine/*` and `<root>/morph/*`, with an
//! optional `sample_id,label` manifest CSV that overrides directory labels.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::featurize::{FeatureError, Label};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("dataset root {0} has neither genuine/ nor morph/")]
    MissingClassDirs(String),
    #[error("duplicate sample id `{0}`")]
    DuplicateId(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error(transparent)]
    Label(#[from] FeatureError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub sample_id: String,
    pub label: Label,
    pub path: PathBuf,
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "pgm" | "png"))
}

/// Lists the image files under the class directories, sorted by sample id.
pub fn scan(root: impl AsRef<Path>, manifest: Option<&Path>) -> Result<Vec<Sample>, DatasetError> {
    let root = root.as_ref();
    let overrides = match manifest {
        Some(p) => read_manifest(p)?,
        None => HashMap::new(),
    };
    let mut found_dir = false;
    let mut samples = Vec::new();
    let mut seen = HashSet::new();
    for (dir, label) in [("genuine", Label::Genuine), ("morph", Label::Morph)] {
        let dir = root.join(dir);
        if !dir.is_dir() {
            continue;
        }
        found_dir = true;
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if !path.is_file() || !is_image(&path) {
                continue;
            }
            let id = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default()
                .to_string();
            if !seen.insert(id.clone()) {
                return Err(DatasetError::DuplicateId(id));
            }
            let label = overrides.get(&id).copied().unwrap_or(label);
            samples.push(Sample {
                sample_id: id,
                label,
                path,
            });
        }
    }
    if !found_dir {
        return Err(DatasetError::MissingClassDirs(root.display().to_string()));
    }
    samples.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
    Ok(samples)
}

fn read_manifest(path: &Path) -> Result<HashMap<String, Label>, DatasetError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some("sample_id,label") => {}
        other => {
            return Err(DatasetError::Manifest(format!(
                "expected header `sample_id,label`, found {other:?}"
            )))
        }
    }
    let mut out = HashMap::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (id, label) = line
            .split_once(',')
            .ok_or_else(|| DatasetError::Manifest(format!("line {}: expected two fields", i + 2)))?;
        out.insert(id.trim().to_string(), label.parse()?);
    }
    Ok(out)
}
