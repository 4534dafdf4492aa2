//! Output tables, file writing and run manifests.
//!
//! CSV layout: a header row, one row per record, then `# key=value` footer
//! lines. Floats are written as `{:.16e}` (17 significant digits) so that
//! they read back to the identical double; lines end in `\n`. The JSON form
//! holds the same content as `{"columns": [...], "rows": [[...]],
//! "summary": {...}}`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One CSV cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl Cell {
    fn csv(self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float(v),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Int(v) => Value::from(v),
            Cell::Float(v) => json_float(v),
        }
    }
}

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

/// JSON has no NaN or infinity; they become strings.
fn json_float(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or_else(|| Value::String(v.to_string()), Value::Number)
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Value)>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    /// Columns x1..xn for point listings.
    pub fn points(dim: usize, points: &[Vec<f64>]) -> Self {
        let mut t = Self::new((1..=dim).map(|i| format!("x{i}")));
        for p in points {
            t.rows.push(p.iter().map(|&v| Cell::Float(v)).collect());
        }
        t
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn note_f64(&mut self, key: &str, value: f64) {
        self.summary.push((key.to_string(), json_float(value)));
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.csv()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        for (k, v) in &self.summary {
            let text = match v {
                Value::Number(n) if n.is_f64() => float(n.as_f64().unwrap_or(f64::NAN)),
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(s, "# {k}={text}");
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|c| c.json()).collect()))
            .collect();
        let summary: Map<String, Value> = self.summary.iter().cloned().collect();
        let v = serde_json::json!({ "columns": self.columns, "rows": rows, "summary": summary });
        let mut s = serde_json::to_string_pretty(&v).expect("tables serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Serializes any value as pretty JSON with a trailing newline.
pub fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("outputs serialize");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Where a command's output goes.
pub struct Sink {
    pub out: Option<PathBuf>,
    started: String,
}

impl Sink {
    pub fn new(out: Option<PathBuf>) -> Self {
        Self { out, started: now() }
    }

    /// Writes `text` to the output file (or stdout) and, for file output,
    /// the manifest beside it.
    pub fn finish(&self, text: &str, invocation: &Value, seed: Option<u64>) -> Result<(), CliError> {
        match &self.out {
            None => {
                print!("{text}");
                Ok(())
            }
            Some(path) => {
                write_file(path, text)?;
                let manifest = RunManifest {
                    config_hash: sha256_hex(serde_json::to_string(invocation).expect("invocations serialize").as_bytes()),
                    seed,
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    started: self.started.clone(),
                    finished: now(),
                    invocation: invocation.clone(),
                    outputs: vec![path.display().to_string()],
                };
                write_file(&manifest_path(path), &json_text(&manifest))
            }
        }
    }
}

/// Written to `<out>.manifest.json` next to every output file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    /// SHA-256 of the canonical JSON of `invocation`.
    pub config_hash: String,
    pub seed: Option<u64>,
    pub version: String,
    pub started: String,
    pub finished: String,
    pub invocation: Value,
    pub outputs: Vec<String>,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    sibling(out, "manifest.json")
}

/// `<out>.<suffix>` in the same directory.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".");
    name.push(suffix);
    out.with_file_name(name)
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Writes through a temporary file and a rename, so readers never see a
/// partial file.
pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    let tmp = sibling(path, "tmp");
    fs::write(&tmp, text)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_round_trip() {
        let mut t = Table::new(["n", "mean"]);
        let x = 0.1 + 0.2;
        t.rows.push(vec![Cell::Int(3), Cell::Float(x)]);
        t.note_f64("c", 1.0 / 3.0);
        let csv = t.to_csv();
        let line = csv.lines().nth(1).unwrap();
        let back: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back.to_bits(), x.to_bits());
        assert!(csv.ends_with("# c=3.3333333333333331e-1\n"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn json_mirrors_csv() {
        let mut t = Table::new(["n", "mean"]);
        t.rows.push(vec![Cell::Int(3), Cell::Float(2.5)]);
        t.note("kind", "x");
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["columns"][1], "mean");
        assert_eq!(v["rows"][0][0], 3);
        assert_eq!(v["rows"][0][1], 2.5);
        assert_eq!(v["summary"]["kind"], "x");
    }

    #[test]
    fn sibling_paths() {
        let p = Path::new("/tmp/run/out.csv");
        assert_eq!(manifest_path(p), Path::new("/tmp/run/out.csv.manifest.json"));
    }
}
