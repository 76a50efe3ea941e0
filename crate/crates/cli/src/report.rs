//! CSV tables and the per-run JSON manifest.

use anyhow::{Context, Result};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Write one CSV table. Every numeric column header carries the symbol name
/// and its unit in brackets. Float formatting is the shortest round-trip
/// representation, so identical inputs give byte-identical files.
pub fn write_csv(path: &Path, headers: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    w.write_record(headers)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn fmt(v: f64) -> String {
    format!("{v}")
}

/// Run manifest: config echo, resolved parameters, seeds, results, wall time.
#[derive(Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub seed: u64,
    pub threads: usize,
    pub strict: bool,
    pub config: serde_json::Value,
    pub results: serde_json::Value,
    pub wall_time_seconds: f64,
}

pub struct RunDir {
    pub dir: PathBuf,
    started: Instant,
}

impl RunDir {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf(), started: Instant::now() })
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn finish(
        &self,
        subcommand: &str,
        seed: u64,
        threads: usize,
        strict: bool,
        config: &impl Serialize,
        results: &impl Serialize,
    ) -> Result<()> {
        let manifest = Manifest {
            tool: "mbhl",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            seed,
            threads,
            strict,
            config: serde_json::to_value(config)?,
            results: serde_json::to_value(results)?,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
        };
        let path = self.file("manifest.json");
        let text = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(&path, text)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
