//! Output directory bookkeeping and the per-command manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};
use crate::table::Table;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ArtifactEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub artifacts: Vec<ArtifactEntry>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects the files a command writes under one directory.
#[derive(Debug)]
pub struct Outputs {
    dir: PathBuf,
    entries: Vec<ArtifactEntry>,
}

impl Outputs {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), entries: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| LabError::io(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| LabError::io(&path, e))?;
        self.entries.push(ArtifactEntry { path: name.to_string(), sha256: sha256_hex(bytes) });
        Ok(path)
    }

    pub fn table(&mut self, name: &str, table: &Table) -> Result<PathBuf> {
        self.bytes(name, &table.to_bytes())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut bytes = serde_json::to_vec_pretty(value).expect("serializable record");
        bytes.push(b'\n');
        self.bytes(name, &bytes)
    }

    pub fn svg(&mut self, name: &str, svg: &str) -> Result<PathBuf> {
        self.bytes(name, svg.as_bytes())
    }

    pub fn artifacts(&self) -> &[ArtifactEntry] {
        &self.entries
    }

    /// Writes `manifest.json` listing everything written so far.
    pub fn finish(self, command: &str, config_hash: &str, seed: Option<u64>) -> Result<Manifest> {
        let manifest = Manifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: config_hash.to_string(),
            seed,
            artifacts: self.entries,
        };
        let path = self.dir.join("manifest.json");
        let mut bytes = serde_json::to_vec_pretty(&manifest).expect("serializable manifest");
        bytes.push(b'\n');
        fs::write(&path, bytes).map_err(|e| LabError::io(&path, e))?;
        Ok(manifest)
    }
}
