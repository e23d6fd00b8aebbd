//! Output files and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::config::KeyValues;
use crate::error::Result;

/// Round-trippable float formatting (17 significant digits).
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl OutputFile {
    pub fn new(name: impl Into<String>, bytes: Vec<u8>) -> Self {
        Self { name: name.into(), bytes }
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }
}

/// Builds a CSV file in memory.
pub fn csv_file(name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<OutputFile> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(OutputFile::new(name, bytes))
}

pub struct RunInfo<'a> {
    pub command: String,
    pub threads: usize,
    pub started_unix: u64,
    pub wall_seconds: f64,
    pub config: &'a KeyValues,
}

pub fn manifest(info: &RunInfo<'_>, files: &[OutputFile]) -> OutputFile {
    let mut s = String::new();
    let _ = writeln!(s, "# wisfbm run manifest; pass with --config to rerun");
    let _ = writeln!(s, "command = {}", info.command);
    let _ = writeln!(s, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "master_seed = {}", info.config.get("seed").unwrap_or("?"));
    let _ = writeln!(s, "threads = {}", info.threads);
    let _ = writeln!(s, "started_unix = {}", info.started_unix);
    let _ = writeln!(s, "wall_seconds = {:.3}", info.wall_seconds);
    for (k, v) in info.config.iter() {
        let _ = writeln!(s, "config.{k} = {v}");
    }
    for f in files {
        let _ = writeln!(s, "file.{} = sha256:{}", f.name, f.sha256());
    }
    OutputFile::new("manifest.txt", s.into_bytes())
}

/// Writes every file, then the manifest, into `dir`.
pub fn write_all(dir: &Path, files: &[OutputFile], manifest: &OutputFile) -> Result<()> {
    fs::create_dir_all(dir)?;
    for f in files.iter().chain(std::iter::once(manifest)) {
        fs::write(dir.join(&f.name), &f.bytes)?;
    }
    Ok(())
}
