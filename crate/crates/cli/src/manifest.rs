//! Declarative run manifests (`table`, `map`, `resample`).
//!
//! Relative paths inside a manifest (`out_dir`, input files) are resolved
//! against the directory containing the manifest.

use approval_dap::experiments::{FeatureTriple, MapElection};
use approval_dap::{CultureSpec, IndexKind, IndexSettings};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt;
use std::path::{Path, PathBuf};

/// A validation failure located by a JSON pointer into the manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for ManifestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "manifest error at {at}: {}", self.message)
    }
}

impl std::error::Error for ManifestError {}

fn err(pointer: impl Into<String>, message: impl Into<String>) -> ManifestError {
    ManifestError {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// Turns a serde_path_to_error path ("elections[3].p") into a JSON pointer.
fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } | Segment::Enum { variant: key } => {
                out.push('/');
                out.push_str(&key.replace('~', "~0").replace('/', "~1"));
            }
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub path: PathBuf,
    #[serde(default)]
    pub group: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableManifest {
    pub command: String,
    pub seed: u64,
    #[serde(default = "ten")]
    pub samples: usize,
    pub out_dir: PathBuf,
    #[serde(default = "all_indices")]
    pub indices: Vec<IndexKind>,
    #[serde(default)]
    pub settings: IndexSettings,
    pub elections: Vec<CultureSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapManifest {
    pub command: String,
    pub seed: u64,
    pub out_dir: PathBuf,
    #[serde(default)]
    pub features: FeatureTriple,
    #[serde(default)]
    pub elections: Vec<MapElection>,
    #[serde(default)]
    pub inputs: Vec<InputFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResampleManifest {
    pub command: String,
    pub seed: u64,
    pub index: IndexKind,
    #[serde(default = "sixty")]
    pub m: usize,
    #[serde(default = "sixty")]
    pub n: usize,
    #[serde(default = "ten")]
    pub samples: usize,
    pub out_dir: PathBuf,
}

fn ten() -> usize {
    10
}

fn sixty() -> usize {
    60
}

fn all_indices() -> Vec<IndexKind> {
    IndexKind::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunManifest {
    Table(TableManifest),
    Map(MapManifest),
    Resample(ResampleManifest),
}

impl RunManifest {
    pub fn command(&self) -> &'static str {
        match self {
            RunManifest::Table(_) => "table",
            RunManifest::Map(_) => "map",
            RunManifest::Resample(_) => "resample",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            RunManifest::Table(t) => t.seed,
            RunManifest::Map(m) => m.seed,
            RunManifest::Resample(r) => r.seed,
        }
    }

    fn out_dir_mut(&mut self) -> &mut PathBuf {
        match self {
            RunManifest::Table(t) => &mut t.out_dir,
            RunManifest::Map(m) => &mut m.out_dir,
            RunManifest::Resample(r) => &mut r.out_dir,
        }
    }

    pub fn out_dir(&self) -> &Path {
        match self {
            RunManifest::Table(t) => &t.out_dir,
            RunManifest::Map(m) => &m.out_dir,
            RunManifest::Resample(r) => &r.out_dir,
        }
    }
}

fn typed<T: for<'de> Deserialize<'de>>(value: &Value) -> Result<T, ManifestError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let pointer = pointer_of(e.path());
        err(pointer, e.into_inner().to_string())
    })
}

fn validate_specs<'a>(specs: impl Iterator<Item = &'a CultureSpec>) -> Result<(), ManifestError> {
    for (i, s) in specs.enumerate() {
        if let Err((field, msg)) = s.culture.validate(s.m, s.n) {
            return Err(err(format!("/elections/{i}/{field}"), msg));
        }
    }
    Ok(())
}

/// Parses and validates manifest text. `base` resolves relative paths.
pub fn parse_manifest(text: &str, base: &Path) -> Result<RunManifest, ManifestError> {
    let value: Value = serde_json::from_str(text).map_err(|e| err("", format!("invalid JSON: {e}")))?;
    let Some(obj) = value.as_object() else {
        return Err(err("", "manifest must be a JSON object"));
    };
    let command = match obj.get("command") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(err("/command", "must be a string")),
        None => return Err(err("", "missing field `command`")),
    };
    if !obj.contains_key("seed") {
        return Err(err("", "missing field `seed`; manifests must fix their seed"));
    }
    let mut manifest = match command.as_str() {
        "table" => {
            let t: TableManifest = typed(&value)?;
            if t.samples == 0 {
                return Err(err("/samples", "must be at least 1"));
            }
            if t.elections.is_empty() {
                return Err(err("/elections", "needs at least one election"));
            }
            if t.settings.sample_multiplier == 0 {
                return Err(err("/settings/sample_multiplier", "must be at least 1"));
            }
            validate_specs(t.elections.iter())?;
            RunManifest::Table(t)
        }
        "map" => {
            let mut m: MapManifest = typed(&value)?;
            if m.elections.is_empty() && m.inputs.is_empty() {
                return Err(err("/elections", "a map needs elections or inputs"));
            }
            validate_specs(m.elections.iter().map(|e| &e.spec))?;
            for (i, input) in m.inputs.iter_mut().enumerate() {
                if input.path.is_relative() {
                    input.path = base.join(&input.path);
                }
                if !input.path.is_file() {
                    return Err(err(format!("/inputs/{i}/path"), format!("no such file: {}", input.path.display())));
                }
            }
            RunManifest::Map(m)
        }
        "resample" => {
            let r: ResampleManifest = typed(&value)?;
            if r.samples == 0 {
                return Err(err("/samples", "must be at least 1"));
            }
            if r.m == 0 || r.n == 0 {
                return Err(err("/m", "sizes must be positive"));
            }
            RunManifest::Resample(r)
        }
        other => return Err(err("/command", format!("unknown command `{other}`; expected table, map or resample"))),
    };
    let out = manifest.out_dir_mut();
    if out.is_relative() {
        *out = base.join(&*out);
    }
    Ok(manifest)
}

/// Reads a manifest file; relative paths resolve against its directory.
pub fn load_manifest(path: &Path) -> Result<RunManifest, ManifestError> {
    let text = std::fs::read_to_string(path).map_err(|e| err("", format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_manifest(&text, &base)
}
