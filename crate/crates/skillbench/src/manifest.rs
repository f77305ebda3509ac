//! JSON run manifest written next to every command's outputs.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfigFile;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run. Worker count and wall-clock time are
/// deliberately left out so the manifest is as reproducible as the CSVs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub command: String,
    pub tool_version: String,
    pub core_version: String,
    pub config_sha256: String,
    pub seed: u64,
    pub split_seed: u64,
    pub dataset_sha256: Option<String>,
    pub config: RunConfigFile,
    pub outputs: Vec<OutputFile>,
}

impl Manifest {
    pub fn new(command: &str, config: &RunConfigFile) -> Self {
        Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            core_version: skillbench_core::VERSION.to_string(),
            config_sha256: sha256_hex(config.to_toml().as_bytes()),
            seed: config.seed,
            split_seed: config.dataset.split_seed,
            dataset_sha256: None,
            config: config.clone(),
            outputs: Vec::new(),
        }
    }

    pub fn record(&mut self, name: &str, bytes: &[u8]) {
        self.outputs.push(OutputFile { path: name.to_string(), sha256: sha256_hex(bytes) });
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        let json = serde_json::to_string_pretty(self).expect("manifests always serialize");
        std::fs::write(dir.join("manifest.json"), json + "\n")
    }
}
