//! Run outputs are staged in memory and written only once the run has
//! succeeded, together with a manifest of digests.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const MANIFEST_NAME: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Default)]
pub struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    output_dir: String,
    created_unix: u64,
    config: &'a BTreeMap<String, String>,
    inputs: BTreeMap<String, String>,
    outputs: BTreeMap<&'a str, String>,
}

impl Artifacts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_slice())
    }

    /// Writes every artifact plus `manifest.json` into `dir`.
    pub fn commit(
        &self,
        dir: &Path,
        command: &str,
        config: &BTreeMap<String, String>,
        inputs: &[PathBuf],
    ) -> Result<()> {
        let mut input_digests = BTreeMap::new();
        for p in inputs {
            input_digests.insert(p.display().to_string(), sha256_hex(&std::fs::read(p)?));
        }
        let manifest = Manifest {
            tool: "driftlab",
            version: env!("CARGO_PKG_VERSION"),
            command,
            output_dir: dir.display().to_string(),
            created_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            config,
            inputs: input_digests,
            outputs: self.files.iter().map(|(n, b)| (n.as_str(), sha256_hex(b))).collect(),
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        std::fs::create_dir_all(dir)?;
        for (name, bytes) in &self.files {
            std::fs::write(dir.join(name), bytes)?;
        }
        std::fs::write(dir.join(MANIFEST_NAME), json)?;
        Ok(())
    }
}
