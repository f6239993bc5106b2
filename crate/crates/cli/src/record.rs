use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::write_atomic;

pub const RECORD_FILE: &str = "run_record.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub threads: usize,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<OutputEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunRecord {
    pub fn write(&self, dir: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::Config(e.to_string()))?;
        write_atomic(&dir.join(RECORD_FILE), format!("{text}\n").as_bytes())
    }

    pub fn read(dir: &Path) -> CliResult<Self> {
        let path = dir.join(RECORD_FILE);
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Re-hash every listed output and compare with the manifest.
    pub fn verify(&self, dir: &Path) -> CliResult<()> {
        for entry in &self.outputs {
            let path = dir.join(&entry.file);
            let bytes = fs::read(&path).map_err(|e| CliError::io(&path, e))?;
            let digest = sha256_hex(&bytes);
            if digest != entry.sha256 || bytes.len() as u64 != entry.bytes {
                return Err(CliError::Verify(format!("{} hashes to {digest}, manifest says {}", entry.file, entry.sha256)));
            }
        }
        Ok(())
    }
}
