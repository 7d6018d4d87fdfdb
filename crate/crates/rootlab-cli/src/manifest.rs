//! Run manifests: every subcommand writes one next to its primary output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use rootlab::error::Result;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    /// Fully resolved parameters after flag/config/default precedence.
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub artifacts: Vec<String>,
    pub tool_version: String,
    pub wall_time_secs: f64,
}

pub struct ManifestBuilder {
    command: String,
    argv: Vec<String>,
    started: Instant,
    seeds: Vec<u64>,
    artifacts: Vec<PathBuf>,
    config: serde_json::Value,
}

impl ManifestBuilder {
    pub fn new(command: &str) -> ManifestBuilder {
        ManifestBuilder {
            command: command.to_string(),
            argv: std::env::args().collect(),
            started: Instant::now(),
            seeds: Vec::new(),
            artifacts: Vec::new(),
            config: serde_json::Value::Null,
        }
    }

    pub fn seeds(&mut self, seeds: &[u64]) -> &mut Self {
        self.seeds = seeds.to_vec();
        self
    }

    pub fn config(&mut self, config: serde_json::Value) -> &mut Self {
        self.config = config;
        self
    }

    pub fn artifact(&mut self, path: &Path) -> &mut Self {
        self.artifacts.push(path.to_path_buf());
        self
    }

    /// Write `<primary>.manifest.json` alongside the first artifact.
    pub fn write(&self) -> Result<PathBuf> {
        let primary = self
            .artifacts
            .first()
            .cloned()
            .unwrap_or_else(|| PathBuf::from(format!("{}.out", self.command)));
        let mut path = primary.into_os_string();
        path.push(".manifest.json");
        let path = PathBuf::from(path);
        let manifest = RunManifest {
            command: self.command.clone(),
            argv: self.argv.clone(),
            config: self.config.clone(),
            seeds: self.seeds.clone(),
            artifacts: self.artifacts.iter().map(|p| p.display().to_string()).collect(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_secs: self.started.elapsed().as_secs_f64(),
        };
        std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
        Ok(path)
    }
}
