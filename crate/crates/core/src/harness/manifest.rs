use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{PersimError, Result};

pub const MANIFEST_HEADER: [&str; 5] = ["ref", "dist", "score", "distortion", "category"];

/// Orientation of the subjective scores.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreConvention {
    /// Higher is better (MOS).
    #[default]
    Mos,
    /// Higher is worse (DMOS).
    Dmos,
}

impl FromStr for ScoreConvention {
    type Err = PersimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mos" => Ok(ScoreConvention::Mos),
            "dmos" => Ok(ScoreConvention::Dmos),
            other => Err(PersimError::InvalidParameter(format!(
                "unknown score convention '{other}' (expected mos or dmos)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestEntry {
    /// Resolved against the manifest's directory.
    pub reference: PathBuf,
    pub distorted: PathBuf,
    /// Paths as written in the manifest.
    pub reference_label: String,
    pub distorted_label: String,
    pub score: f64,
    pub distortion: String,
    /// One or more groups, written `;`-separated in the file.
    pub categories: Vec<String>,
    /// 1-based line number in the manifest.
    pub line: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatabaseManifest {
    pub database: String,
    pub convention: ScoreConvention,
    pub entries: Vec<ManifestEntry>,
}

impl DatabaseManifest {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Subjective scores oriented so that higher means better quality.
    pub fn oriented_score(&self, entry: &ManifestEntry) -> f64 {
        match self.convention {
            ScoreConvention::Mos => entry.score,
            ScoreConvention::Dmos => -entry.score,
        }
    }
}

/// Reads and validates a `ref,dist,score,distortion,category` CSV.
///
/// Every problem found is collected so one run reports all of them.
pub fn load_manifest(path: &Path, convention: ScoreConvention) -> Result<DatabaseManifest> {
    let file = std::fs::File::open(path).map_err(|e| PersimError::io(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut problems = Vec::new();
    let header = reader.headers().map_err(|e| PersimError::Manifest {
        path: path.to_path_buf(),
        problems: vec![format!("unreadable header: {e}")],
    })?;
    let header: Vec<&str> = header.iter().collect();
    if header != MANIFEST_HEADER {
        return Err(PersimError::Manifest {
            path: path.to_path_buf(),
            problems: vec![format!(
                "header must be '{}', found '{}'",
                MANIFEST_HEADER.join(","),
                header.join(",")
            )],
        });
    }

    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!("malformed CSV: {e}"));
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != MANIFEST_HEADER.len() {
            problems.push(format!(
                "row {line}: expected {} fields, found {}",
                MANIFEST_HEADER.len(),
                record.len()
            ));
            continue;
        }
        let (ref_label, dist_label) = (record[0].to_string(), record[1].to_string());
        let mut ok = true;
        let score = match record[2].parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ => {
                problems.push(format!("row {line}, column score: '{}' is not a finite number", &record[2]));
                ok = false;
                f64::NAN
            }
        };
        if record[3].is_empty() {
            problems.push(format!("row {line}, column distortion: empty"));
            ok = false;
        }
        let categories: Vec<String> = record[4]
            .split(';')
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .map(str::to_string)
            .collect();
        if categories.is_empty() {
            problems.push(format!("row {line}, column category: empty"));
            ok = false;
        }
        for (column, label) in [("ref", &ref_label), ("dist", &dist_label)] {
            if label.is_empty() {
                problems.push(format!("row {line}, column {column}: empty path"));
                ok = false;
            } else if !base.join(label).is_file() {
                problems.push(format!("row {line}, column {column}: no such file '{label}'"));
                ok = false;
            }
        }
        if !seen.insert((ref_label.clone(), dist_label.clone())) {
            problems.push(format!("row {line}: duplicate pair ({ref_label}, {dist_label})"));
            ok = false;
        }
        if ok {
            entries.push(ManifestEntry {
                reference: base.join(&ref_label),
                distorted: base.join(&dist_label),
                reference_label: ref_label,
                distorted_label: dist_label,
                score,
                distortion: record[3].to_string(),
                categories,
                line,
            });
        }
    }

    if !problems.is_empty() {
        return Err(PersimError::Manifest {
            path: path.to_path_buf(),
            problems,
        });
    }
    let database = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "database".into());
    Ok(DatabaseManifest {
        database,
        convention,
        entries,
    })
}
