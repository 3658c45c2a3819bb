//! Run report emitted by every subcommand; identical inputs and seed
//! reproduce identical result fields (timings excluded).

use anyhow::Result;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub tool_version: String,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub result: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing_ms: u64,
}

#[derive(Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl RunReport {
    pub fn new(seed: u64) -> Self {
        RunReport {
            command: String::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            inputs: Vec::new(),
            result: serde_json::Value::Null,
            decision: None,
            error: None,
            timing_ms: 0,
        }
    }

    pub fn record_input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(hasher.finalize()),
        });
        Ok(())
    }
}
