//! Artifact writing and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Writes files into the output directory and remembers their hashes.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    entries: Vec<ArtifactEntry>,
}

impl ArtifactWriter {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), entries: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, content: &str) -> Result<()> {
        fs::write(self.dir.join(name), content)?;
        self.entries.push(ArtifactEntry {
            name: name.to_string(),
            bytes: content.len(),
            sha256: sha256_hex(content.as_bytes()),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn entries(&self) -> &[ArtifactEntry] {
        &self.entries
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    /// `value < bound`.
    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, passed: value < bound }
    }

    /// `value ≥ bound`.
    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, passed: value >= bound }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        let v = if ok { 1.0 } else { 0.0 };
        Self { name: name.into(), value: v, bound: 1.0, passed: ok }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub checks: Vec<Check>,
}

impl Suite {
    pub fn new(name: impl Into<String>, checks: Vec<Check>) -> Self {
        let passed = checks.iter().filter(|c| c.passed).count();
        Self { name: name.into(), passed, total: checks.len(), checks }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Versions {
    pub sasaki: String,
    pub parallel_feature: bool,
    pub rayon_threads: usize,
}

impl Versions {
    pub fn current() -> Self {
        #[cfg(feature = "parallel")]
        let threads = rayon::current_num_threads();
        #[cfg(not(feature = "parallel"))]
        let threads = 1;
        Self { sasaki: env!("CARGO_PKG_VERSION").to_string(), parallel_feature: cfg!(feature = "parallel"), rayon_threads: threads }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub command: String,
    pub status: String,
    pub config: RunConfig,
    pub versions: Versions,
    pub wall_time_s: f64,
    pub suites: Vec<Suite>,
    pub artifacts: Vec<ArtifactEntry>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_known_input() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn writer_records_entries() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = ArtifactWriter::create(&dir.path().join("nested")).unwrap();
        w.write("a.csv", "x,value\n").unwrap();
        assert_eq!(w.entries()[0].bytes, 8);
        assert_eq!(fs::read_to_string(w.dir().join("a.csv")).unwrap(), "x,value\n");
    }

    #[test]
    fn suite_counts() {
        let s = Suite::new("demo", vec![Check::below("a", 1.0, 2.0), Check::at_least("b", 1.0, 2.0)]);
        assert_eq!((s.passed, s.total, s.ok()), (1, 2, false));
    }
}
