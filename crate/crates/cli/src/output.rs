//! The single writer of a run: every artifact goes through [`OutputDir`],
//! which records its digest, and the manifest is written last by rename.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    pub epsilon: f64,
    pub l1: f64,
    pub n1: usize,
    pub n2: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub step: String,
    pub seconds: f64,
}

/// Complete record of a finished run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub label: Option<String>,
    pub profile: String,
    pub epsilon: Vec<f64>,
    pub seed: u64,
    pub config: serde_json::Value,
    pub grids: Vec<GridRecord>,
    pub outputs: Vec<OutputRecord>,
    pub timings: Vec<Timing>,
}

impl RunManifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST);
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::ManifestMismatch(format!("{}: {e}", path.display())))
    }

    pub fn output(&self, name: &str) -> Option<&OutputRecord> {
        self.outputs.iter().find(|o| o.path == name)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Output directory of one run.
pub struct OutputDir {
    root: PathBuf,
    records: Vec<OutputRecord>,
    timings: Vec<Timing>,
    grids: Vec<GridRecord>,
}

impl OutputDir {
    /// Create the directory and remove any manifest of an earlier run, so a
    /// failed rerun cannot be mistaken for a complete one.
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        let m = root.join(MANIFEST);
        if m.exists() {
            fs::remove_file(&m).map_err(|e| CliError::io(&m, e))?;
        }
        Ok(OutputDir { root: root.to_path_buf(), records: Vec::new(), timings: Vec::new(), grids: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.records.retain(|r| r.path != name);
        self.records.push(OutputRecord { path: name.to_string(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 });
        Ok(())
    }

    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let bytes = csv_bytes(header, rows);
        self.write_bytes(name, &bytes)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::compute("serialization", e))?;
        bytes.push(b'\n');
        self.write_bytes(name, &bytes)
    }

    pub fn record_grid(&mut self, g: GridRecord) {
        self.grids.push(g);
    }

    /// Run `f`, recording its wall time under `step`.
    pub fn timed<T>(&mut self, step: &str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let t0 = Instant::now();
        let r = f(self)?;
        self.timings.push(Timing { step: step.to_string(), seconds: t0.elapsed().as_secs_f64() });
        Ok(r)
    }

    pub fn records(&self) -> &[OutputRecord] {
        &self.records
    }

    /// Write the manifest through a temporary file and a rename.
    pub fn finish(self, mut manifest: RunManifest) -> Result<RunManifest> {
        manifest.outputs = self.records;
        manifest.timings = self.timings;
        manifest.grids = self.grids;
        let mut bytes = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::compute("serialization", e))?;
        bytes.push(b'\n');
        let tmp = self.root.join(format!(".{MANIFEST}.partial"));
        fs::write(&tmp, &bytes).map_err(|e| CliError::io(&tmp, e))?;
        let dst = self.root.join(MANIFEST);
        fs::rename(&tmp, &dst).map_err(|e| CliError::io(&dst, e))?;
        Ok(manifest)
    }
}

pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

/// Shortest round-trip decimal form.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// File-name tag of an `ε`, e.g. `0.0625 → eps_0.0625`.
pub fn eps_tag(eps: f64) -> String {
    format!("eps_{eps:?}")
}

/// Read a CSV written by [`OutputDir::write_csv`] into rows of numbers.
pub fn read_numeric_csv(path: &Path, expect: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
    let header: Vec<String> = r
        .headers()
        .map_err(|e| CliError::io(path, std::io::Error::other(e)))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != expect {
        return Err(CliError::ManifestMismatch(format!("{}: columns {header:?}, expected {expect:?}", path.display())));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| CliError::ManifestMismatch(format!("{}: bad number '{s}'", path.display()))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}
