//! Implementations of the CLI subcommands. Every command writes its
//! artifacts to disk and returns a short report for stdout.

use crate::manifest::{load_manifest, ManifestError, MapManifest, ResampleManifest, RunManifest, TableManifest};
use approval_dap::experiments::{
    complementarity, generate_map_elections, index_table, palette, resampling_experiment, run_map, IndexTable,
    MapResult, ResamplingMatrix,
};
use approval_dap::indices::evaluate;
use approval_dap::io::{
    format_sig6, read_csv_matrix, read_election_file, threshold_scores, write_csv_labeled, write_csv_rows,
    write_native, write_svg_heatmap, write_svg_scatter,
};
use approval_dap::{CultureSpec, Election, IndexKind, IndexSettings};
use serde_json::{json, Map, Value};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn runtime(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ManifestError> for CliError {
    fn from(e: ManifestError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<approval_dap::Error> for CliError {
    fn from(e: approval_dap::Error) -> Self {
        CliError::runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| CliError::runtime(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    fs::write(path, contents).map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}

/// Parameters of `generate`, as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct GenerateArgs {
    pub family: String,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub p: Option<f64>,
    pub phi: Option<f64>,
    pub k: Option<usize>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub variant: Option<u8>,
    pub probs: Option<Vec<f64>>,
    pub base: Option<String>,
    pub label: Option<String>,
}

impl GenerateArgs {
    /// Builds the same JSON object a manifest entry would contain.
    pub fn to_spec(&self) -> CliResult<CultureSpec> {
        let mut obj = Map::new();
        obj.insert("family".into(), json!(self.family));
        obj.insert("m".into(), json!(self.m));
        obj.insert("n".into(), json!(self.n));
        obj.insert("seed".into(), json!(self.seed));
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                obj.insert(k.into(), v);
            }
        };
        put("p", self.p.map(|v| json!(v)));
        put("phi", self.phi.map(|v| json!(v)));
        put("k", self.k.map(|v| json!(v)));
        put("x", self.x.map(|v| json!(v)));
        put("y", self.y.map(|v| json!(v)));
        put("variant", self.variant.map(|v| json!(v)));
        put("probs", self.probs.clone().map(|v| json!(v)));
        put("label", self.label.clone().map(|v| json!(v)));
        if let Some(base) = &self.base {
            let v: Value = serde_json::from_str(base)
                .or_else(|_| serde_json::from_str(&format!(r#"{{"family": "{base}"}}"#)))
                .map_err(|e| CliError::validation(format!("--base: {e}")))?;
            obj.insert("base".into(), v);
        }
        let value = Value::Object(obj);
        let spec: CultureSpec = serde_path_to_error::deserialize(&value).map_err(|e| {
            let path = e.path().to_string();
            CliError::validation(format!("invalid generator parameters ({path}): {}", e.into_inner()))
        })?;
        spec.culture
            .validate(spec.m, spec.n)
            .map_err(|(field, msg)| CliError::validation(format!("--{}: {msg}", field.replace('/', "."))))?;
        Ok(spec)
    }
}

/// Generates one election. Returns the native JSON and a stats line.
pub fn generate(args: &GenerateArgs) -> CliResult<(String, String)> {
    let spec = args.to_spec()?;
    let mut e = spec.generate()?;
    if let Some(l) = &args.label {
        e = e.with_label(l.clone());
    }
    let s = e.stats();
    let line = format!(
        "m={} n={} satr={} avl={}",
        e.num_candidates(),
        e.num_voters(),
        format_sig6(s.satr),
        format_sig6(s.avl)
    );
    Ok((write_native(&e), line))
}

/// Index values for a list of election files as CSV. Files that fail to
/// load or evaluate are reported in the error list and skipped.
pub fn index_files(files: &[PathBuf], kinds: &[IndexKind], settings: &IndexSettings) -> (String, Vec<String>) {
    let mut headers: Vec<String> = ["file", "label", "m", "n"].iter().map(|s| s.to_string()).collect();
    headers.extend(kinds.iter().map(|k| k.name().to_string()));
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for f in files {
        let result = read_election_file(f).and_then(|e| evaluate(&e, kinds, settings).map(|v| (e, v)));
        match result {
            Ok((e, values)) => {
                let mut row = vec![
                    f.display().to_string(),
                    e.label().unwrap_or("").to_string(),
                    e.num_candidates().to_string(),
                    e.num_voters().to_string(),
                ];
                row.extend(values.iter().map(|&v| format_sig6(v)));
                rows.push(row);
            }
            Err(err) => errors.push(format!("{}: {err}", f.display())),
        }
    }
    let csv = write_csv_rows(&headers, &rows).unwrap_or_default();
    (csv, errors)
}

/// Computes the index table of a manifest.
pub fn compute_table(t: &TableManifest) -> CliResult<IndexTable> {
    Ok(index_table(&t.elections, &t.indices, t.samples, t.seed, &t.settings)?)
}

fn table_csv(table: &IndexTable) -> CliResult<String> {
    let mut headers = Vec::new();
    for k in &table.kinds {
        headers.push(k.name().to_string());
    }
    for k in &table.kinds {
        headers.push(format!("{}_std", k.name()));
    }
    let rows: Vec<Vec<Option<f64>>> = table
        .mean
        .iter()
        .zip(&table.std)
        .map(|(mu, sd)| mu.iter().chain(sd).map(|&v| Some(v)).collect())
        .collect();
    Ok(write_csv_labeled("election", &table.labels, &headers, &rows)?)
}

pub fn run_table(t: &TableManifest) -> CliResult<String> {
    let table = compute_table(t)?;
    let path = t.out_dir.join("table.csv");
    write_file(&path, &table_csv(&table)?)?;
    Ok(format!(
        "{} elections x {} indices ({} samples) -> {}",
        table.labels.len(),
        table.kinds.len(),
        table.samples,
        path.display()
    ))
}

/// A computed map together with the names and groups of its elections.
#[derive(Debug, Clone)]
pub struct MapOutcome {
    pub labels: Vec<String>,
    pub groups: Vec<String>,
    pub result: MapResult,
    pub complementarity: f64,
}

pub fn compute_map(m: &MapManifest) -> CliResult<MapOutcome> {
    let mut elections = generate_map_elections(&m.elections)?;
    let mut labels: Vec<String> = m.elections.iter().map(|e| e.spec.display_label()).collect();
    let mut groups: Vec<String> = m.elections.iter().map(|e| e.group_name()).collect();
    for input in &m.inputs {
        let e: Election = read_election_file(&input.path)
            .map_err(|err| CliError::runtime(format!("{}: {err}", input.path.display())))?;
        labels.push(e.label().unwrap_or("").to_string());
        groups.push(input.group.clone().unwrap_or_else(|| "Input".into()));
        elections.push(e);
    }
    let result = run_map(&elections, &m.features, m.seed)?;
    let col = |f: fn(&approval_dap::experiments::FeatureVector) -> f64| result.features.iter().map(f).collect::<Vec<_>>();
    let complementarity = complementarity(&col(|v| v.agr), &col(|v| v.div), &col(|v| v.pol))?;
    Ok(MapOutcome {
        labels,
        groups,
        result,
        complementarity,
    })
}

pub fn run_map_manifest(m: &MapManifest) -> CliResult<String> {
    let out = compute_map(m)?;
    let r = &out.result;
    let dir = &m.out_dir;
    let names: Vec<String> = m.features.kinds().iter().map(|k| k.name().to_string()).collect();

    let mut headers = vec!["label".to_string(), "group".to_string()];
    headers.extend(names.iter().cloned());
    let rows: Vec<Vec<String>> = (0..out.labels.len())
        .map(|i| {
            let f = r.features[i].as_array();
            let mut row = vec![out.labels[i].clone(), out.groups[i].clone()];
            row.extend(f.iter().map(|&v| format_sig6(v)));
            row
        })
        .collect();
    write_file(&dir.join("features.csv"), &write_csv_rows(&headers, &rows)?)?;

    let dist: Vec<Vec<Option<f64>>> = r.distances.iter().map(|row| row.iter().map(|&v| Some(v)).collect()).collect();
    write_file(&dir.join("distances.csv"), &write_csv_labeled("election", &out.labels, &out.labels, &dist)?)?;

    let headers: Vec<String> = ["label", "group", "x", "y"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = (0..out.labels.len())
        .map(|i| {
            let [x, y] = r.embedding.coords[i];
            vec![out.labels[i].clone(), out.groups[i].clone(), format_sig6(x), format_sig6(y)]
        })
        .collect();
    write_file(&dir.join("embedding.csv"), &write_csv_rows(&headers, &rows)?)?;

    let mut distinct: Vec<&String> = Vec::new();
    for g in &out.groups {
        if !distinct.contains(&g) {
            distinct.push(g);
        }
    }
    let colors: Vec<String> = out
        .groups
        .iter()
        .map(|g| palette(distinct.iter().position(|d| *d == g).unwrap_or(0)).to_string())
        .collect();
    let points: Vec<(f64, f64)> = r.embedding.coords.iter().map(|c| (c[0], c[1])).collect();
    write_file(&dir.join("map.svg"), &write_svg_scatter(&points, &out.groups, &colors)?)?;

    let summary = json!({
        "elections": out.labels.len(),
        "seed": m.seed,
        "features": m.features,
        "distortion": r.embedding.distortion,
        "stress": r.embedding.stress,
        "smacof_iterations": r.embedding.stress_history.len(),
        "complementarity": out.complementarity,
    });
    let text = serde_json::to_string_pretty(&summary).map_err(|e| CliError::runtime(e.to_string()))?;
    write_file(&dir.join("summary.json"), &text)?;
    Ok(format!(
        "{} elections; distortion {}; complementarity {} -> {}",
        out.labels.len(),
        format_sig6(r.embedding.distortion),
        format_sig6(out.complementarity),
        dir.display()
    ))
}

pub fn compute_resampling(r: &ResampleManifest) -> CliResult<ResamplingMatrix> {
    Ok(resampling_experiment(r.index, r.m, r.n, r.samples, r.seed)?)
}

pub fn run_resample(r: &ResampleManifest) -> CliResult<String> {
    let matrix = compute_resampling(r)?;
    let name = r.index.name();
    let headers: Vec<String> = matrix.phis.iter().map(|phi| format!("phi={}", format_sig6(*phi))).collect();
    let rows: Vec<String> = matrix.ps.iter().map(|p| format!("p={}", format_sig6(*p))).collect();
    let values: Vec<Vec<Option<f64>>> = matrix.values.iter().map(|r| r.iter().map(|&v| Some(v)).collect()).collect();
    write_file(&r.out_dir.join(format!("resampling_{name}.csv")), &write_csv_labeled("p\\phi", &rows, &headers, &values)?)?;
    let title = format!("{name}, m={}, n={}, {} samples per cell", r.m, r.n, r.samples);
    write_file(
        &r.out_dir.join(format!("resampling_{name}.svg")),
        &write_svg_heatmap(&matrix.values, &rows, &headers, &title)?,
    )?;
    let spread = matrix.column_spread().into_iter().fold(0.0f64, f64::max);
    Ok(format!(
        "{name}: {}x{} grid, max column spread {} -> {}",
        matrix.ps.len(),
        matrix.phis.len(),
        format_sig6(spread),
        r.out_dir.display()
    ))
}

pub fn run_manifest(m: &RunManifest) -> CliResult<String> {
    match m {
        RunManifest::Table(t) => run_table(t),
        RunManifest::Map(x) => run_map_manifest(x),
        RunManifest::Resample(r) => run_resample(r),
    }
}

/// Loads a manifest and checks that it is for `expected` (if given).
pub fn load_for(path: &Path, expected: Option<&str>) -> CliResult<RunManifest> {
    let m = load_manifest(path)?;
    if let Some(cmd) = expected {
        if m.command() != cmd {
            return Err(CliError::validation(format!(
                "manifest error at /command: expected `{cmd}`, found `{}`",
                m.command()
            )));
        }
    }
    Ok(m)
}

/// Converts a CSV score matrix (voters x candidates, header row of
/// candidate names) into a native election file.
pub fn convert_scores(text: &str, threshold: f64, label: Option<&str>) -> CliResult<String> {
    let (_, matrix) = read_csv_matrix(text)?;
    let mut e = threshold_scores(&matrix, threshold)?;
    if let Some(l) = label {
        e = e.with_label(l);
    }
    Ok(write_native(&e))
}
