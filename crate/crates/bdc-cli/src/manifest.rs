//! Run manifests: every command writes one so a run directory is
//! self-describing and reproducible.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    pub seed: u64,
    /// effective flag/parameter values, stringified
    pub params: BTreeMap<String, String>,
    /// sha256 of each input data file
    pub data_digests: BTreeMap<String, String>,
    /// sha256 of the effective configuration text (when one exists)
    pub config_digest: Option<String>,
    pub timings_secs: BTreeMap<String, f64>,
    pub wall_clock_secs: f64,
}

pub struct ManifestBuilder {
    manifest: RunManifest,
    started: Instant,
    phase: Option<(String, Instant)>,
}

impl ManifestBuilder {
    pub fn new(command: &str, seed: u64) -> ManifestBuilder {
        ManifestBuilder {
            manifest: RunManifest {
                version: env!("CARGO_PKG_VERSION").to_string(),
                command: command.to_string(),
                seed,
                params: BTreeMap::new(),
                data_digests: BTreeMap::new(),
                config_digest: None,
                timings_secs: BTreeMap::new(),
                wall_clock_secs: 0.0,
            },
            started: Instant::now(),
            phase: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.manifest.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn digest_file(&mut self, name: &str, path: &Path) -> Result<&mut Self, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        self.manifest
            .data_digests
            .insert(name.to_string(), sha256_hex(&bytes));
        Ok(self)
    }

    pub fn config_digest(&mut self, text: &str) -> &mut Self {
        self.manifest.config_digest = Some(sha256_hex(text.as_bytes()));
        self
    }

    pub fn begin_phase(&mut self, name: &str) {
        self.end_phase();
        self.phase = Some((name.to_string(), Instant::now()));
    }

    pub fn end_phase(&mut self) {
        if let Some((name, t0)) = self.phase.take() {
            self.manifest
                .timings_secs
                .insert(name, t0.elapsed().as_secs_f64());
        }
    }

    pub fn write(mut self, path: &Path) -> Result<(), CliError> {
        self.end_phase();
        self.manifest.wall_clock_secs = self.started.elapsed().as_secs_f64();
        let json = serde_json::to_string_pretty(&self.manifest).expect("serializable");
        std::fs::write(path, json)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
